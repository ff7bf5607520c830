use super::hauptmodul::hauptmodul_series;
use super::series::{QSeries, GRID};
use crate::error::{Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

/// Smallest accepted verification precision: 120 integral q-terms.
pub const MIN_IDENTITY_PREC: i64 = 120 * GRID;

/// Extra grid units computed beyond the requested precision, absorbing the
/// precision lost to negative valuations in products.
const WORK_MARGIN: i64 = 20 * GRID;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// Outcome of a q-identity check. Exponents are grid units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: String,
    pub status: Status,
    pub residual_leading_exponent: Option<i64>,
    pub precision: i64,
}

impl IdentityReport {
    /// `{id, status, residual_leading_exponent, precision}` with exponents
    /// in q-units (a "n/24" string when not integral).
    pub fn to_json(&self) -> Value {
        let q_units = |e: i64| -> Value {
            if e % GRID == 0 {
                json!(e / GRID)
            } else {
                let r = BigRational::new(e.into(), GRID.into());
                json!(format!("{}/{}", r.numer(), r.denom()))
            }
        };
        json!({
            "id": self.id,
            "status": self.status.as_str(),
            "residual_leading_exponent": self.residual_leading_exponent.map(q_units),
            "precision": q_units(self.precision),
        })
    }
}

/// A registered identity `LHS = RHS`, evaluated as the residual `LHS - RHS`.
#[derive(Clone)]
pub struct QIdentity {
    pub id: &'static str,
    pub statement: &'static str,
    residual: fn(i64) -> Result<QSeries>,
    perturbation: Option<BigRational>,
}

impl std::fmt::Debug for QIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QIdentity({})", self.id)
    }
}

impl QIdentity {
    /// The same identity with `c` added to its left-hand side.
    pub fn perturbed(mut self, c: BigRational) -> QIdentity {
        self.perturbation = Some(c);
        self
    }

    /// `LHS - RHS` known exactly below grid exponent `prec`.
    pub fn residual(&self, prec: i64) -> Result<QSeries> {
        let mut r = (self.residual)(prec + WORK_MARGIN)?;
        if let Some(c) = &self.perturbation {
            r = r.add_constant(c);
        }
        r.require(prec)
    }

    pub fn verify(&self, prec: i64) -> Result<IdentityReport> {
        if prec < MIN_IDENTITY_PREC {
            return Err(Error::PrecisionTooSmall(prec, MIN_IDENTITY_PREC));
        }
        let r = self.residual(prec)?;
        let lead = r.valuation();
        Ok(IdentityReport {
            id: self.id.to_string(),
            status: if lead.is_none() { Status::Pass } else { Status::Fail },
            residual_leading_exponent: lead,
            precision: prec,
        })
    }
}

fn h(name: &str, prec: i64) -> Result<QSeries> {
    hauptmodul_series(name, prec.max(10 * GRID))
}

/// `name(m tau)` known below `prec`.
fn h_at(name: &str, m: u32, prec: i64) -> Result<QSeries> {
    let inner = (prec + m as i64 - 1) / m as i64 + GRID;
    Ok(h(name, inner)?.substitute(m))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn h2_from_xi(w: i64) -> Result<QSeries> {
    let xi = h("xi4", w)?;
    let num = xi.add_constant(&int(-1)).pow(2).scale(&int(8));
    let rhs = num.div(&xi.add_constant(&int(1)))?;
    Ok(h("h2", w)?.sub(&rhs))
}

fn h3_level(w: i64) -> Result<QSeries> {
    let rhs = h("xi9", w)?.pow(3).add_constant(&int(-1)).scale(&int(27));
    Ok(h_at("h3", 3, w)?.sub(&rhs))
}

fn h4_level(w: i64) -> Result<QSeries> {
    let rhs = h("xi16", w)?.pow(4).add_constant(&int(-1)).scale(&int(16));
    Ok(h_at("h4", 4, w)?.sub(&rhs))
}

fn h5_level(w: i64) -> Result<QSeries> {
    let p: Vec<BigRational> = [-11, 5, 0, 5, 0, 1].iter().map(|&c| int(c)).collect();
    let rhs = h("xi25", w)?.eval_poly(&p);
    Ok(h_at("h5", 5, w)?.sub(&rhs))
}

fn weierstrass36(w: i64) -> Result<QSeries> {
    let rhs = h("xi36", w)?.pow(3).add_constant(&int(1));
    Ok(h("gamma36", w)?.pow(2).sub(&rhs))
}

fn h6_level(w: i64) -> Result<QSeries> {
    let rhs = h("xi36", w)?.pow(3).add_constant(&int(-8));
    Ok(h_at("h6", 6, w)?.sub(&rhs))
}

fn h6p_level(w: i64) -> Result<QSeries> {
    let rhs = h("xi12", w)?.pow(2).add_constant(&int(-1));
    Ok(h_at("h6p", 2, w)?.sub(&rhs))
}

fn h2_level(w: i64) -> Result<QSeries> {
    let rhs = h("xi4", w)?.pow(2).add_constant(&int(-1)).scale(&int(64));
    Ok(h_at("h2", 2, w)?.sub(&rhs))
}

fn h2_partial_quotient(w: i64) -> Result<QSeries> {
    let xi = h("xi4", w)?;
    let lhs = h("h2", w)?
        .sub(&xi.scale(&int(8)))
        .add_constant(&int(24))
        .mul(&xi.add_constant(&int(1)))
        .scale(&BigRational::new(1.into(), 32.into()));
    Ok(lhs.add_constant(&int(-1)))
}

fn h6p_shift(w: i64) -> Result<QSeries> {
    Ok(h("h6p", w)?.sub(&h("h6", w)?).add_constant(&int(-8)))
}

/// The seven level-lowering and model identities, followed by three
/// auxiliary identities about the same coordinates.
pub fn qidentity_registry() -> Vec<QIdentity> {
    let mk = |id, statement, residual| QIdentity { id, statement, residual, perturbation: None };
    vec![
        mk("h2_from_xi", "h2 = 8(xi4 - 1)^2/(xi4 + 1)", h2_from_xi as fn(i64) -> Result<QSeries>),
        mk("h3_level", "h3(3t) = 27(xi9^3 - 1)", h3_level),
        mk("h4_level", "h4(4t) = 16(xi16^4 - 1)", h4_level),
        mk("h5_level", "h5(5t) = P(xi25)", h5_level),
        mk("weierstrass36", "gamma36^2 = xi36^3 + 1", weierstrass36),
        mk("h6_level", "h6(6t) = xi36^3 - 8", h6_level),
        mk("h6p_level", "h6p(2t) = xi12^2 - 1", h6p_level),
        mk("h2_level", "h2(2t) = 64(xi4^2 - 1)", h2_level),
        mk("h2_partial_quotient", "(h2 - 8 xi4 + 24)(xi4 + 1)/32 = 1", h2_partial_quotient),
        mk("h6p_shift", "h6p - h6 = 8", h6p_shift),
    ]
}

pub fn find_qidentity(id: &str) -> Result<QIdentity> {
    qidentity_registry()
        .into_iter()
        .find(|q| q.id == id)
        .ok_or_else(|| Error::UnknownName(id.to_string()))
}

/// Checks a registered identity to grid precision `prec`.
pub fn verify_qidentity(id: &str, prec: i64) -> Result<IdentityReport> {
    find_qidentity(id)?.verify(prec)
}

/// `8(xi4 + 1)^2/(xi4 - 1) - h2`, the other sign pattern for the
/// quadratic relation between `h2` and `xi4`. It does not vanish.
pub fn h2_from_xi_swapped_signs(prec: i64) -> Result<QSeries> {
    let w = prec + WORK_MARGIN;
    let xi = h("xi4", w)?;
    let num = xi.add_constant(&int(1)).pow(2).scale(&int(8));
    let rhs = num.div(&xi.add_constant(&int(-1)))?;
    h("h2", w)?.sub(&rhs).require(prec)
}
