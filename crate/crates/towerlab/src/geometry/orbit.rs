//! Ramification of the tower steps `C_n -> C_{n+1}`, found over a large
//! finite surrogate field by following the forward orbits of the critical
//! points of the level map.
//!
//! `C_n` is the curve of `n`-tuples, which models tower level `n + 1`.
//! Above a point of `C_n` whose last coordinate is `b`, the next coordinate
//! is a root of `A(w Z) = tau(A(b))`; if `x_n - b` has valuation `e` there,
//! the new coordinate `Z` satisfies `(Z - Z0)^{e_A(Z0)} ~ pi^{e e_A(b)}`
//! and Abhyankar's lemma gives the local picture upstairs.

use super::profile::rh_from_different;
use crate::error::{Error, Result};
use crate::finitefield::{uni_roots, FieldCtx, UniPoly};
use crate::towercore::{apply_w, level_value, preimages, tau, value_index, BaseKind, BasePoint, TowerSpec};
use num_integer::Integer;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

pub const MAX_DEPTH: u32 = 12;
pub const DEFAULT_SURROGATES: [u64; 2] = [101, 103];
const MAX_TRACKED: usize = 100_000;

/// Multiset of valuations `e` of `x_n - b`, as `e -> count`.
type Valuations = BTreeMap<u64, u64>;

/// One step `C_n -> C_{n+1}`, labelled by the tower level `n + 1` of its
/// source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    pub level: u32,
    /// `sum (e - 1)` over the points of the target curve.
    pub different: u64,
    pub genus_source: u64,
    pub genus_target: u64,
    /// Ramified points of the target, grouped by their last coordinate:
    /// `(coordinate, [(index, count)])`.
    pub branch: Vec<(BasePoint, Vec<(u64, u64)>)>,
}

impl OrbitStep {
    pub fn is_ramified(&self) -> bool {
        self.different > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub tower: &'static str,
    pub p: u64,
    pub k: u32,
    pub depth: u32,
    pub steps: Vec<OrbitStep>,
    pub stabilization_level: Option<u32>,
}

impl OrbitReport {
    /// `(level, different)` for each step, the field-independent part.
    pub fn signature(&self) -> Vec<(u32, u64)> {
        self.steps.iter().map(|s| (s.level, s.different)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tower": self.tower,
            "surrogate": {"p": self.p, "k": self.k},
            "depth": self.depth,
            "stabilization_level": self.stabilization_level,
            "steps": self.steps.iter().map(|s| json!({
                "level": s.level,
                "different": s.different,
                "ramified": s.is_ramified(),
                "genus_source": s.genus_source,
                "genus_target": s.genus_target,
                "branch": s.branch.iter().map(|(pt, idx)| json!({
                    "coordinate": pt.label(),
                    "indices": idx.iter().map(|&(e, c)| json!([e, c])).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Least level from which every computed step is unramified.
pub fn stabilization(steps: &[OrbitStep]) -> Option<u32> {
    let mut level = None;
    for s in steps.iter().rev() {
        if s.is_ramified() {
            break;
        }
        level = Some(s.level);
    }
    level
}

fn too_small(spec: &TowerSpec, ctx: &FieldCtx) -> Error {
    Error::SurrogateTooSmall { tower: spec.name.into(), p: ctx.characteristic(), k: ctx.degree() }
}

fn split_roots(spec: &TowerSpec, ctx: &FieldCtx, f: &UniPoly) -> Result<Vec<crate::finitefield::FieldElement>> {
    let roots = uni_roots(ctx, f)?;
    if roots.iter().map(|r| r.1).sum::<usize>() != f.degree().unwrap_or(0) {
        return Err(too_small(spec, ctx));
    }
    Ok(roots.into_iter().map(|r| r.0).collect())
}

/// Points where the level map `A` ramifies.
pub fn critical_points(spec: &TowerSpec, ctx: &FieldCtx) -> Result<BTreeSet<BasePoint>> {
    let a = UniPoly::from_ints(ctx, spec.value_map);
    let crit_x = split_roots(spec, ctx, &a.derivative(ctx))?;
    let mut out = BTreeSet::new();
    match spec.base {
        BaseKind::ProjectiveLine => {
            out.extend(crit_x.into_iter().map(BasePoint::Affine));
            out.insert(BasePoint::Infinity);
        }
        BaseKind::Elliptic => {
            out.insert(BasePoint::Origin);
            let two_torsion = split_roots(spec, ctx, &UniPoly::from_ints(ctx, &[1, 0, 0, 1]))?;
            for x in crit_x.into_iter().chain(two_torsion) {
                let rhs = ctx.add(ctx.pow(x, 3), ctx.one());
                let y = ctx.sqrt(rhs).ok_or_else(|| too_small(spec, ctx))?;
                out.insert(BasePoint::Curve(x, y));
                out.insert(BasePoint::Curve(x, ctx.neg(y)));
            }
        }
    }
    out.retain(|&p| value_index(spec, ctx, p) > 1);
    Ok(out)
}

/// Ramification of every step up to tower level `depth`, over `ctx`.
pub fn ramification_orbit(spec: &TowerSpec, ctx: &FieldCtx, depth: u32) -> Result<OrbitReport> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow(depth));
    }
    spec.check_field(ctx)?;
    let deg_a = spec.value_map.len() as u64 - 1;
    if ctx.characteristic() <= 2 * deg_a {
        return Err(too_small(spec, ctx));
    }
    let l = spec.l as u64;
    let seeds = critical_points(spec, ctx)?;
    let gcrit: BTreeSet<BasePoint> = seeds.iter().map(|&z| apply_w(spec, ctx, z)).collect();
    let mut tracked: BTreeMap<BasePoint, Valuations> =
        seeds.iter().map(|&b| (b, Valuations::from([(1, 1)]))).collect();
    let mut genus = spec.base_genus();
    let mut steps = Vec::new();
    // step C_n -> C_{n+1} for n = 1 .. depth - 2
    for n in 1..depth.saturating_sub(1) {
        let deg = l.pow(n - 1);
        let mut next: BTreeMap<BasePoint, Valuations> = BTreeMap::new();
        let mut tracked_pred: BTreeMap<BasePoint, u64> = BTreeMap::new();
        let mut branch: BTreeMap<BasePoint, BTreeMap<u64, u64>> = BTreeMap::new();
        let mut r: u64 = 0;
        for (&b, vals) in &tracked {
            let eb = value_index(spec, ctx, b) as u64;
            let fiber = preimages(spec, ctx, tau(spec, ctx, level_value(spec, ctx, b)))?;
            if fiber.unresolved > 0 {
                return Err(too_small(spec, ctx));
            }
            for &(z, ed) in &fiber.points {
                let d = apply_w(spec, ctx, z);
                let ed = ed as u64;
                let g0 = eb.gcd(&ed);
                let (rx, ry) = (ed / g0, eb / g0);
                *tracked_pred.entry(d).or_default() += eb;
                for (&e, &cnt) in vals {
                    let g = e.gcd(&rx);
                    let lcm = e.lcm(&rx);
                    let points = cnt * g0 * g;
                    *next.entry(d).or_default().entry(ry * lcm / rx).or_default() += points;
                    let index = lcm / e;
                    if index > 1 {
                        r += points * (index - 1);
                        *branch.entry(d).or_default().entry(index).or_default() += points;
                    }
                }
            }
        }
        // untracked predecessors: e = e_A(b) = 1 and l^{n-1} points above each
        for &d in &gcrit {
            let untracked = l - tracked_pred.get(&d).copied().unwrap_or(0);
            let rx = value_index(spec, ctx, apply_w(spec, ctx, d)) as u64;
            if untracked > 0 && rx > 1 {
                r += untracked * deg * (rx - 1);
                *branch.entry(d).or_default().entry(rx).or_default() += untracked * deg;
            }
        }
        let full = l.pow(n);
        let mut kept = BTreeMap::new();
        for d in next.keys().copied().chain(seeds.iter().copied()).collect::<BTreeSet<_>>() {
            let mut vals = next.remove(&d).unwrap_or_default();
            let total: u64 = vals.iter().map(|(e, c)| e * c).sum();
            if total > full {
                return Err(Error::InconsistentProfile(format!("{} points above {}", total, d.label())));
            }
            if total < full {
                *vals.entry(1).or_default() += full - total;
            }
            if seeds.contains(&d) || vals.keys().any(|&e| e != 1) {
                kept.insert(d, vals);
            }
        }
        if kept.len() > MAX_TRACKED {
            return Err(Error::OrbitNotFinite);
        }
        tracked = kept;
        let g_next = rh_from_different(l, genus, r as i128)?;
        steps.push(OrbitStep {
            level: n + 1,
            different: r,
            genus_source: genus,
            genus_target: g_next,
            branch: branch.into_iter().map(|(d, m)| (d, m.into_iter().collect())).collect(),
        });
        genus = g_next;
    }
    let stabilization_level = stabilization(&steps);
    Ok(OrbitReport {
        tower: spec.name,
        p: ctx.characteristic(),
        k: ctx.degree(),
        depth,
        steps,
        stabilization_level,
    })
}

/// [`ramification_orbit`] over the smallest `GF(p^k)` that splits the data.
pub fn ramification_orbit_auto(spec: &TowerSpec, p: u64, depth: u32) -> Result<OrbitReport> {
    let mut last = None;
    for k in 1..=2 {
        let ctx = match FieldCtx::new(p, k) {
            Ok(c) => c,
            Err(e @ Error::FieldTooLarge { .. }) => {
                last.get_or_insert(e);
                break;
            }
            Err(e) => return Err(e),
        };
        match ramification_orbit(spec, &ctx, depth) {
            Err(e @ Error::SurrogateTooSmall { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| Error::SurrogateTooSmall { tower: spec.name.into(), p, k: 2 }))
}

/// Runs every surrogate and insists they agree.
///
/// ```
/// use towerlab::geometry::ramify;
/// use towerlab::towercore::tower;
///
/// let r = ramify(&tower("shimura_p2").unwrap(), 8, &[101, 103]).unwrap();
/// assert_eq!(r[0].stabilization_level, Some(5));
/// ```
pub fn ramify(spec: &TowerSpec, depth: u32, primes: &[u64]) -> Result<Vec<OrbitReport>> {
    let mut distinct = primes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Usage("at least two distinct surrogate primes are required".into()));
    }
    let reports = primes.iter().map(|&p| ramification_orbit_auto(spec, p, depth)).collect::<Result<Vec<_>>>()?;
    let first = &reports[0];
    for r in &reports[1..] {
        if r.signature() != first.signature() {
            return Err(Error::SurrogateDisagreement(format!(
                "{}: p={} gives {:?}, p={} gives {:?}",
                spec.name,
                first.p,
                first.signature(),
                r.p,
                r.signature()
            )));
        }
    }
    Ok(reports)
}
