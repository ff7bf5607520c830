use super::catalog::TowerSpec;
use super::fiber::{apply_w, neighbors, Fiber};
use super::point::{base_points, validate, BasePoint};
use crate::error::{Error, Result};
use crate::finitefield::FieldCtx;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// A tuple `(P_1, ..., P_m)` with consecutive pairs on the correspondence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chain {
    pub tower: &'static str,
    pub points: Vec<BasePoint>,
}

impl Chain {
    pub fn new(spec: &TowerSpec, points: Vec<BasePoint>) -> Chain {
        Chain { tower: spec.name, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `{tower, q, level, chain}`; `level` is the number of coordinates.
    pub fn to_json(&self, q: u64) -> Value {
        json!({
            "tower": self.tower,
            "q": q,
            "level": self.points.len(),
            "chain": self.points.iter().map(BasePoint::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Every base point with its fiber, computed once per (tower, field).
pub struct NeighborTable {
    pub points: Vec<BasePoint>,
    pub fibers: Vec<Fiber>,
    index: BTreeMap<BasePoint, usize>,
}

impl NeighborTable {
    pub fn build(spec: &TowerSpec, ctx: &FieldCtx) -> Result<NeighborTable> {
        spec.check_field(ctx)?;
        let points = base_points(spec, ctx);
        let fibers = points.iter().map(|&p| neighbors(spec, ctx, p)).collect::<Result<Vec<_>>>()?;
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(NeighborTable { points, fibers, index })
    }

    pub fn index_of(&self, p: &BasePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Successor indices with multiplicities.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.fibers[i].points.iter().map(move |(q, m)| (self.index[q], *m))
    }
}

/// Checks every point and every consecutive pair.
pub fn chain_is_valid(spec: &TowerSpec, ctx: &FieldCtx, c: &Chain) -> Result<bool> {
    if c.tower != spec.name || c.points.is_empty() {
        return Ok(false);
    }
    for &p in &c.points {
        if validate(spec, ctx, p).is_err() {
            return Ok(false);
        }
    }
    for pair in c.points.windows(2) {
        if !neighbors(spec, ctx, pair[0])?.contains(&pair[1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_valid(spec: &TowerSpec, ctx: &FieldCtx, c: &Chain) -> Result<()> {
    if chain_is_valid(spec, ctx, c)? {
        Ok(())
    } else {
        Err(Error::InvalidChain(format!("{:?}", c.points.iter().map(BasePoint::label).collect::<Vec<_>>())))
    }
}

/// Number of rational chains of length `m`, by dynamic programming over
/// the neighbor table. With `distinct_only` each edge counts once,
/// otherwise with its multiplicity.
///
/// ```
/// use towerlab::finitefield::FieldCtx;
/// use towerlab::towercore::{chain_count, tower};
///
/// let ctx = FieldCtx::new(3, 2).unwrap();
/// assert_eq!(chain_count(&tower("x0_2").unwrap(), &ctx, 1, true).unwrap(), 10);
/// ```
pub fn chain_count(spec: &TowerSpec, ctx: &FieldCtx, m: usize, distinct_only: bool) -> Result<u128> {
    let table = NeighborTable::build(spec, ctx)?;
    Ok(chain_counts(&table, m, distinct_only)?.pop().unwrap_or(0))
}

/// Counts for every length `1..=m` from one table.
pub fn chain_counts(table: &NeighborTable, m: usize, distinct_only: bool) -> Result<Vec<u128>> {
    if m == 0 {
        return Err(Error::EmptyChain);
    }
    let n = table.points.len();
    let mut c = vec![1u128; n];
    let mut out = vec![n as u128];
    for _ in 1..m {
        let mut next = vec![0u128; n];
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, mult) in table.successors(i) {
                next[j] += if distinct_only { ci } else { ci * mult as u128 };
            }
        }
        c = next;
        out.push(c.iter().sum());
    }
    Ok(out)
}

/// The involution `(P_1, ..., P_m) -> (w P_m, ..., w P_1)`.
pub fn chain_reverse(spec: &TowerSpec, ctx: &FieldCtx, c: &Chain) -> Result<Chain> {
    require_valid(spec, ctx, c)?;
    let out = Chain::new(spec, c.points.iter().rev().map(|&p| apply_w(spec, ctx, p)).collect());
    debug_assert!(chain_is_valid(spec, ctx, &out)?);
    Ok(out)
}

/// The `m - 1` consecutive coordinates starting after offset `j`.
pub fn chain_project(c: &Chain, j: usize, m: usize) -> Result<Chain> {
    if m < 2 || j + m - 1 > c.len() {
        return Err(Error::ProjectionOutOfRange { j, m, len: c.len() });
    }
    Ok(Chain { tower: c.tower, points: c.points[j..j + m - 1].to_vec() })
}

/// All rational chains of length `m` whose points lie in `within`
/// (or anywhere when `None`), in lexicographic order.
pub fn enumerate_chains(
    table: &NeighborTable,
    spec: &TowerSpec,
    m: usize,
    within: Option<&std::collections::BTreeSet<BasePoint>>,
    limit: usize,
) -> Result<Vec<Chain>> {
    if m == 0 {
        return Err(Error::EmptyChain);
    }
    let allowed = |p: &BasePoint| within.is_none_or(|s| s.contains(p));
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> =
        (0..table.points.len()).rev().filter(|&i| allowed(&table.points[i])).map(|i| vec![i]).collect();
    while let Some(path) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        if path.len() == m {
            out.push(Chain::new(spec, path.iter().map(|&i| table.points[i]).collect()));
            continue;
        }
        let last = *path.last().unwrap();
        let succ: Vec<usize> =
            table.successors(last).map(|(j, _)| j).filter(|&j| allowed(&table.points[j])).collect();
        for &j in succ.iter().rev() {
            let mut next = path.clone();
            next.push(j);
            stack.push(next);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towercore::catalog::{catalog, tower};
    use rand::{Rng, SeedableRng};

    #[test]
    fn length_one_reversal_is_w() {
        let t = tower("x0_2").unwrap();
        let ctx = FieldCtx::of_order(9).unwrap();
        let p = BasePoint::Affine(ctx.from_int(2));
        let r = chain_reverse(&t, &ctx, &Chain::new(&t, vec![p])).unwrap();
        assert_eq!(r.points, vec![apply_w(&t, &ctx, p)]);
    }

    #[test]
    fn invalid_chain_is_rejected() {
        let t = tower("x0_2").unwrap();
        let ctx = FieldCtx::prime(7).unwrap();
        // 1 -> 1 is the only edge out of 1.
        let bad = Chain::new(&t, vec![BasePoint::Affine(ctx.one()), BasePoint::Affine(ctx.zero())]);
        assert!(matches!(chain_reverse(&t, &ctx, &bad), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn projection_bounds_and_composition() {
        let t = tower("x0_2").unwrap();
        let ctx = FieldCtx::prime(7).unwrap();
        let c = Chain::new(&t, (0..6).map(|i| BasePoint::Affine(ctx.from_int(i))).collect());
        assert_eq!(chain_project(&c, 0, c.len() + 1).unwrap(), c);
        assert!(chain_project(&c, 1, c.len() + 1).is_err());
        assert!(chain_project(&c, 0, 1).is_err());
        for m in 2..=4 {
            let a = chain_project(&chain_project(&c, 1, m + 1).unwrap(), 1, m).unwrap();
            assert_eq!(a, chain_project(&c, 2, m).unwrap());
        }
    }

    #[test]
    fn zero_length_is_an_error() {
        let ctx = FieldCtx::prime(5).unwrap();
        assert_eq!(chain_count(&tower("x0_2").unwrap(), &ctx, 0, true), Err(Error::EmptyChain));
    }

    #[test]
    fn counts_respect_the_trivial_upper_bound() {
        for t in catalog() {
            for q in [5u64, 7, 25] {
                let ctx = FieldCtx::of_order(q).unwrap();
                if t.check_field(&ctx).is_err() {
                    continue;
                }
                let table = NeighborTable::build(&t, &ctx).unwrap();
                let counts = chain_counts(&table, 6, true).unwrap();
                let n = table.points.len() as u128;
                for (i, &c) in counts.iter().enumerate() {
                    assert!(c <= n * (t.l as u128).pow(i as u32), "{}", t.name);
                }
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_counts() {
        let t = tower("x0_3").unwrap();
        let ctx = FieldCtx::of_order(4).unwrap();
        let table = NeighborTable::build(&t, &ctx).unwrap();
        let counts = chain_counts(&table, 4, true).unwrap();
        for m in 1..=4 {
            let chains = enumerate_chains(&table, &t, m, None, usize::MAX).unwrap();
            assert_eq!(chains.len() as u128, counts[m - 1]);
            assert!(chains.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn x0_3x2_aux_involution_preserves_chains() {
        let t = tower("x0_3x2").unwrap();
        let ctx = FieldCtx::of_order(25).unwrap();
        let table = NeighborTable::build(&t, &ctx).unwrap();
        let (_, w3) = t.aux_involutions[0];
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let chains = enumerate_chains(&table, &t, 4, None, usize::MAX).unwrap();
        for _ in 0..200 {
            let c = &chains[rng.gen_range(0..chains.len())];
            let image = Chain::new(
                &t,
                c.points.iter().map(|&p| crate::towercore::fiber::apply_involution(&ctx, w3, p)).collect(),
            );
            assert!(chain_is_valid(&t, &ctx, &image).unwrap());
        }
    }
}
