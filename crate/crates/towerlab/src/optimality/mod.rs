//! Point counts against genus along a tower over a fixed field, compared
//! with the Drinfeld-Vladut bound `sqrt(q) - 1`.

use crate::error::{Error, Result};
use crate::finitefield::FieldCtx;
use crate::geometry::{tower_genus_seq, GenusMethod, MAX_GENUS_LEVEL};
use crate::towercore::{chain_counts, complete_set_from, CompleteSet, NeighborTable, TowerSpec};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;

/// `sqrt(q) - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DvBound {
    pub q: u64,
}

pub fn dv_bound(q: u64) -> DvBound {
    assert!(q >= 2, "q must be at least 2");
    DvBound { q }
}

impl DvBound {
    /// The bound as an integer when `q` is a perfect square.
    pub fn exact(&self) -> Option<u64> {
        let r = self.q.sqrt();
        (r * r == self.q).then(|| r - 1)
    }

    pub fn value(&self) -> f64 {
        (self.q as f64).sqrt() - 1.0
    }

    /// `n / g <= sqrt(q) - 1`, decided exactly: `(n + g)^2 <= q g^2`.
    pub fn admits(&self, n: u128, g: u64) -> bool {
        let (n, g, q) = (BigInt::from(n), BigInt::from(g), BigInt::from(self.q));
        let s = &n + &g;
        &s * &s <= q * &g * &g
    }

    /// `n / g >= c (sqrt(q) - 1)` for a rational `c >= 0`, decided exactly.
    pub fn at_least_fraction(&self, n: u128, g: u64, c: &BigRational) -> bool {
        if g == 0 {
            return true;
        }
        // n/(c g) + 1 >= sqrt(q)
        if c.is_zero() {
            return true;
        }
        let lhs = BigRational::new(n.into(), g.into()) / c + BigRational::from_integer(1.into());
        &lhs * &lhs >= BigRational::from_integer(self.q.into())
    }
}

impl fmt::Display for DvBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{:.6}", self.value()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityRow {
    pub tower: &'static str,
    pub q: u64,
    /// Chain length `n`; the chains model tower level `n + 1`.
    pub level: u32,
    pub genus: u64,
    pub genus_method: GenusMethod,
    pub s: usize,
    pub s_chain_bound: u128,
    pub model_count: u128,
    pub dv: DvBound,
}

impl OptimalityRow {
    /// `s_chain_bound / genus`, undefined in genus 0.
    pub fn ratio(&self) -> Option<BigRational> {
        (self.genus > 0).then(|| BigRational::new(self.s_chain_bound.into(), self.genus.into()))
    }

    pub fn ratio_text(&self) -> String {
        match self.ratio() {
            Some(r) => format!("{}/{}", r.numer(), r.denom()),
            None => "undefined".into(),
        }
    }

    pub fn ratio_within_bound(&self) -> bool {
        self.genus == 0 || self.dv.admits(self.s_chain_bound, self.genus)
    }

    pub fn csv_record(&self) -> [String; 10] {
        [
            self.tower.to_string(),
            self.q.to_string(),
            self.level.to_string(),
            self.genus.to_string(),
            self.genus_method.to_string(),
            self.s.to_string(),
            self.s_chain_bound.to_string(),
            self.model_count.to_string(),
            self.ratio_text(),
            self.dv.to_string(),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tower": self.tower,
            "q": self.q,
            "level": self.level,
            "genus": self.genus,
            "genus_method": self.genus_method.as_str(),
            "S": self.s,
            "s_chain_bound": self.s_chain_bound.to_string(),
            "model_count": self.model_count.to_string(),
            "ratio": self.ratio().map(|r| format!("{}/{}", r.numer(), r.denom())),
            "dv": self.dv.to_string(),
        })
    }
}

pub const CSV_HEADER: [&str; 10] =
    ["tower", "q", "level", "genus", "genus_method", "S", "s_chain_bound", "model_count", "ratio", "dv"];

#[derive(Clone, Debug)]
pub struct Experiment {
    pub complete_set: CompleteSet,
    pub rows: Vec<OptimalityRow>,
    pub warnings: Vec<String>,
    /// Upper bound on rational base points, `#C_1(F_q)`.
    pub base_points: usize,
}

impl Experiment {
    /// `s_chain_bound <= model_count <= #C_1 * l^(n-1)` on every row.
    pub fn counts_consistent(&self, l: u32) -> bool {
        self.rows.iter().all(|r| {
            let top = self.base_points as u128 * (l as u128).pow(r.level - 1);
            r.s_chain_bound <= r.model_count && r.model_count <= top
        })
    }

    pub fn ratios_within_bound(&self) -> bool {
        self.rows.iter().all(OptimalityRow::ratio_within_bound)
    }

    /// Ratio nondecreasing over the rows with genus at least 2.
    pub fn ratio_monotone(&self) -> bool {
        let r: Vec<BigRational> = self.rows.iter().filter(|r| r.genus >= 2).filter_map(|r| r.ratio()).collect();
        r.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn final_ratio_at_least(&self, c: &BigRational) -> bool {
        self.rows.last().is_some_and(|r| r.genus > 0 && r.dv.at_least_fraction(r.s_chain_bound, r.genus, c))
    }
}

/// One row per chain length `1..=nmax`.
///
/// ```
/// use towerlab::finitefield::FieldCtx;
/// use towerlab::optimality::run_experiment;
/// use towerlab::towercore::tower;
///
/// let e = run_experiment(&tower("x0_2").unwrap(), &FieldCtx::new(5, 2).unwrap(), 4).unwrap();
/// assert_eq!(e.complete_set.len(), 2);
/// assert_eq!(e.rows[3].s_chain_bound, 16);
/// ```
pub fn run_experiment(spec: &TowerSpec, ctx: &FieldCtx, nmax: u32) -> Result<Experiment> {
    spec.check_field(ctx)?;
    if nmax == 0 {
        return Err(Error::EmptyChain);
    }
    if nmax + 1 > MAX_GENUS_LEVEL {
        return Err(Error::GenusUnavailable {
            tower: spec.name.into(),
            level: nmax + 1,
            reason: format!("genus sequences stop at level {MAX_GENUS_LEVEL}"),
        });
    }
    let q = ctx.order();
    let table = NeighborTable::build(spec, ctx)?;
    let s = complete_set_from(&table, spec, q, None);
    let counts = chain_counts(&table, nmax as usize, true)?;
    let genus = tower_genus_seq(spec, nmax + 1)?;
    let dv = dv_bound(q);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for n in 1..=nmax {
        let g = &genus[n as usize];
        if g.method == GenusMethod::OracleFormula {
            warnings.push(format!(
                "{} level {}: genus {} taken from the classical X0(N) formula",
                spec.name,
                n + 1,
                g.genus
            ));
        }
        rows.push(OptimalityRow {
            tower: spec.name,
            q,
            level: n,
            genus: g.genus,
            genus_method: g.method,
            s: s.len(),
            s_chain_bound: s.len() as u128 * (spec.l as u128).pow(n - 1),
            model_count: counts[n as usize - 1],
            dv,
        });
    }
    Ok(Experiment { complete_set: s, rows, warnings, base_points: table.points.len() })
}
