use super::catalog::TowerSpec;
use super::chain::NeighborTable;
use super::point::BasePoint;
use crate::error::Result;
use crate::finitefield::FieldCtx;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// The largest set `S` of rational base points such that every point of
/// `S` has `l` distinct rational neighbors, all in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteSet {
    pub tower: &'static str,
    pub q: u64,
    pub points: BTreeSet<BasePoint>,
}

impl CompleteSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tower": self.tower,
            "q": self.q,
            "size": self.points.len(),
            "points": self.points.iter().map(BasePoint::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Greatest fixed point of the pruning rule.
///
/// ```
/// use towerlab::finitefield::FieldCtx;
/// use towerlab::towercore::{complete_set, tower};
///
/// let ctx = FieldCtx::new(5, 2).unwrap();
/// let s = complete_set(&tower("x0_2").unwrap(), &ctx).unwrap();
/// assert_eq!(s.len(), 2);
/// ```
pub fn complete_set(spec: &TowerSpec, ctx: &FieldCtx) -> Result<CompleteSet> {
    let table = NeighborTable::build(spec, ctx)?;
    Ok(complete_set_from(&table, spec, ctx.order(), None))
}

/// Prunes starting from `start` (all points when `None`).
pub fn complete_set_from(
    table: &NeighborTable,
    spec: &TowerSpec,
    q: u64,
    start: Option<&BTreeSet<BasePoint>>,
) -> CompleteSet {
    let n = table.points.len();
    let mut alive: Vec<bool> = table.points.iter().map(|p| start.is_none_or(|s| s.contains(p))).collect();
    // Reverse edges: who depends on whom.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for (j, _) in table.successors(i) {
            preds[j].push(i);
        }
    }
    let good = |i: usize, alive: &[bool]| {
        table.fibers[i].splits_completely(spec.l) && table.successors(i).all(|(j, _)| alive[j])
    };
    let mut queue: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    while let Some(i) = queue.pop() {
        if alive[i] && !good(i, &alive) {
            alive[i] = false;
            queue.extend(preds[i].iter().copied().filter(|&p| alive[p]));
        }
    }
    CompleteSet {
        tower: spec.name,
        q,
        points: (0..n).filter(|&i| alive[i]).map(|i| table.points[i]).collect(),
    }
}
