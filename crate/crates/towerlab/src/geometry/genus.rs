use super::orbit::{ramification_orbit_auto, OrbitReport, MAX_DEPTH};
use crate::error::{Error, Result};
use crate::finitefield::is_prime;
use crate::towercore::{ModularLabel, TowerSpec};
use serde_json::{json, Value};
use std::fmt;

pub const MAX_GENUS_LEVEL: u32 = 14;

/// Surrogate primes tried in order; the first two that split the critical
/// data are used and must agree.
pub const SURROGATE_CANDIDATES: [u64; 10] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenusMethod {
    /// Known values for the rational first levels.
    Anchor,
    RiemannHurwitz,
    OracleFormula,
}

impl GenusMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            GenusMethod::Anchor => "paper-anchor",
            GenusMethod::RiemannHurwitz => "riemann-hurwitz",
            GenusMethod::OracleFormula => "oracle-formula",
        }
    }
}

impl fmt::Display for GenusMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusRow {
    pub tower: &'static str,
    pub level: u32,
    pub genus: u64,
    pub method: GenusMethod,
}

impl GenusRow {
    pub fn to_json(&self) -> Value {
        json!({"tower": self.tower, "level": self.level, "genus": self.genus, "method": self.method.as_str()})
    }
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut a = 0;
            while n.is_multiple_of(d) {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn phi(p: u64, a: u32) -> u64 {
    if a == 0 {
        1
    } else {
        (p - 1) * p.pow(a - 1)
    }
}

/// Genus of `X0(N)` from the index, the elliptic points and the cusps:
/// `g = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2`.
///
/// ```
/// use towerlab::geometry::x0_genus;
///
/// assert_eq!(x0_genus(11), 1);
/// assert_eq!(x0_genus(16), 0);
/// ```
pub fn x0_genus(n: u64) -> u64 {
    assert!(n >= 1);
    let f = factor(n);
    let mut mu = n as i128;
    for &(p, _) in &f {
        mu = mu / p as i128 * (p as i128 + 1);
    }
    let nu2: i128 = if n.is_multiple_of(4) {
        0
    } else {
        f.iter().map(|&(p, _)| if p == 2 { 1 } else if p % 4 == 1 { 2 } else { 0 }).product()
    };
    let nu3: i128 = if n.is_multiple_of(9) {
        0
    } else {
        f.iter().map(|&(p, _)| if p == 3 { 1 } else if p % 3 == 1 { 2 } else { 0 }).product()
    };
    let cusps: i128 = f
        .iter()
        .map(|&(p, a)| (0..=a).map(|i| phi(p, i.min(a - i)) as i128).sum::<i128>())
        .product();
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    debug_assert_eq!(twelve_g % 12, 0);
    (twelve_g / 12) as u64
}

fn rh_rows(spec: &TowerSpec, depth: u32) -> Result<OrbitReport> {
    let mut found: Vec<OrbitReport> = Vec::new();
    for &p in SURROGATE_CANDIDATES.iter().filter(|&&p| is_prime(p) && spec.is_admissible(p)) {
        match ramification_orbit_auto(spec, p, depth) {
            Ok(r) => found.push(r),
            Err(Error::SurrogateTooSmall { .. }) => continue,
            Err(e) => return Err(e),
        }
        if found.len() == 2 {
            break;
        }
    }
    if found.len() < 2 {
        return Err(Error::GenusUnavailable {
            tower: spec.name.into(),
            level: depth,
            reason: "no two surrogate fields split the ramification data".into(),
        });
    }
    if found[0].signature() != found[1].signature() {
        return Err(Error::SurrogateDisagreement(format!("{} at p={} and p={}", spec.name, found[0].p, found[1].p)));
    }
    Ok(found.swap_remove(0))
}

/// Genus of every tower level `1..=nmax`.
pub fn tower_genus_seq(spec: &TowerSpec, nmax: u32) -> Result<Vec<GenusRow>> {
    if nmax > MAX_GENUS_LEVEL {
        return Err(Error::LevelOverflow(nmax));
    }
    let row = |level, genus, method| GenusRow { tower: spec.name, level, genus, method };
    match spec.label {
        ModularLabel::Classical { .. } => {
            let mut rows: Vec<GenusRow> = (1..=nmax)
                .map(|n| {
                    let level = spec.label.classical_level(n).ok_or(Error::LevelOverflow(n))?;
                    Ok(row(n, x0_genus(level), GenusMethod::OracleFormula))
                })
                .collect::<Result<_>>()?;
            // cross-check the first two steps against Riemann-Hurwitz
            if nmax >= 3 {
                let depth = nmax.min(4);
                let orbit = rh_rows(spec, depth)?;
                for s in &orbit.steps {
                    let target = &rows[s.level as usize];
                    let source = &rows[s.level as usize - 1];
                    if s.genus_target != target.genus || s.genus_source != source.genus {
                        return Err(Error::InconsistentProfile(format!(
                            "{} level {}: Riemann-Hurwitz gives {}, the genus formula {}",
                            spec.name,
                            s.level + 1,
                            s.genus_target,
                            target.genus
                        )));
                    }
                }
            }
            rows.truncate(nmax as usize);
            Ok(rows)
        }
        ModularLabel::Shimura { .. } => {
            let mut rows = Vec::new();
            for n in 1..=nmax.min(2) {
                rows.push(row(n, 0, GenusMethod::Anchor));
            }
            if nmax <= 2 {
                return Ok(rows);
            }
            let orbit = rh_rows(spec, nmax.min(MAX_DEPTH))?;
            if orbit.steps.first().map(|s| s.genus_source) != Some(0) {
                return Err(Error::InconsistentProfile(format!("{} level 2 is not rational", spec.name)));
            }
            for s in &orbit.steps {
                rows.push(row(s.level + 1, s.genus_target, GenusMethod::RiemannHurwitz));
            }
            let l = spec.l as u64;
            while (rows.len() as u32) < nmax {
                let n = rows.len() as u32 + 1;
                if orbit.stabilization_level.is_none() {
                    return Err(Error::GenusUnavailable {
                        tower: spec.name.into(),
                        level: n,
                        reason: format!("no stabilization within depth {}", orbit.depth),
                    });
                }
                let g = rows.last().expect("level 2 present").genus;
                rows.push(row(n, l * (g - 1) + 1, GenusMethod::RiemannHurwitz));
            }
            Ok(rows)
        }
    }
}
