//! Exact checks of the rational-function identities behind the towers:
//! the involutions, the cleared relations `Phi` and a few side identities.

use super::identities::Status;
use super::rational::{MPoly, RationalExpr};
use crate::error::{Error, Result};
use crate::towercore::{catalog, tower, Involution, RelationKind, TowerSpec};
use num_rational::BigRational;
use serde_json::{json, Value};

const X: usize = 0;
const Y: usize = 1;
const W: usize = 2;

/// Outcome of a symbolic check. `witness` is zero on success and the
/// offending polynomial otherwise; `scalar` is set for checks that hold up
/// to a constant factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalReport {
    pub id: String,
    pub status: Status,
    pub scalar: Option<BigRational>,
    pub witness: MPoly,
}

impl RationalReport {
    fn exact(id: &str, diff: MPoly) -> RationalReport {
        let status = if diff.is_zero() { Status::Pass } else { Status::Fail };
        RationalReport { id: id.to_string(), status, scalar: None, witness: diff }
    }

    fn proportional(id: &str, lhs: &MPoly, rhs: &MPoly) -> RationalReport {
        match lhs.scalar_ratio(rhs) {
            Some(c) => RationalReport { id: id.to_string(), status: Status::Pass, scalar: Some(c), witness: MPoly::zero() },
            None => RationalReport {
                id: id.to_string(),
                status: Status::Fail,
                scalar: None,
                witness: lhs.primitive().sub(&rhs.primitive()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "status": self.status.as_str(),
            "scalar": self.scalar.as_ref().map(|c| c.to_string()),
            "witness": if self.witness.is_zero() { Value::Null } else { json!(self.witness.to_string()) },
        })
    }
}

/// Every registered id, in a fixed order.
pub fn rational_identity_ids() -> Vec<String> {
    let mut ids = vec!["dihedral5".to_string()];
    for t in catalog() {
        ids.push(format!("invol_sq_{}", t.name));
        for (aux, _) in t.aux_involutions {
            ids.push(format!("invol_sq_{}_{}", t.name, aux));
        }
    }
    ids.extend(catalog().iter().map(|t| format!("phi_consistency_{}", t.name)));
    ids.push("equiv_form_3x2".into());
    ids.push("w3_commute".into());
    ids
}

pub fn verify_rational_identity(id: &str) -> Result<RationalReport> {
    let unknown = || Error::UnknownName(id.to_string());
    if id == "dihedral5" {
        return Ok(dihedral5());
    }
    if id == "equiv_form_3x2" {
        return equiv_form_3x2();
    }
    if id == "w3_commute" {
        return w3_commute();
    }
    if let Some(rest) = id.strip_prefix("phi_consistency_") {
        let t = tower(rest).map_err(|_| unknown())?;
        return phi_consistency(id, &t);
    }
    if let Some(rest) = id.strip_prefix("invol_sq_") {
        for t in catalog() {
            if rest == t.name {
                return involution_square(id, t.involution);
            }
            for (aux, inv) in t.aux_involutions {
                if rest == format!("{}_{}", t.name, aux) {
                    return involution_square(id, *inv);
                }
            }
        }
    }
    Err(unknown())
}

fn int(n: i64) -> RationalExpr {
    RationalExpr::int(n)
}

fn placeholder() -> RationalExpr {
    int(0)
}

// P(W - 1/W) = W^5 - 11 - W^-5, with W in variable x
fn dihedral5() -> RationalReport {
    let p = MPoly::from_x_coeffs(tower("x0_5").expect("catalog").value_map);
    let w = RationalExpr::var(X);
    let arg = w.sub(&RationalExpr::poly(MPoly::one()).div(&w).expect("x != 0"));
    let lhs = p.compose(&[arg, placeholder(), placeholder()]);
    let w5 = MPoly::var(X).pow(5);
    let rhs = RationalExpr::new(w5.pow(2).sub(&w5.scale_int(11)).sub(&MPoly::one()), w5).expect("nonzero");
    RationalReport::exact("dihedral5", lhs.difference(&rhs))
}

/// `w(P)` on `y^2 = x^3 + 1` for `P = (X, Y)` in variables `(y, w)`.
fn reflection(anchor: (i64, i64)) -> (RationalExpr, RationalExpr) {
    let (a, b) = anchor;
    let (px, py) = (RationalExpr::var(Y), RationalExpr::var(W));
    // anchor + (X, -Y)
    let slope = py.neg().sub(&int(b)).div(&px.sub(&int(a))).expect("X != a");
    let x3 = slope.pow(2).sub(&int(a)).sub(&px);
    let y3 = slope.mul(&int(a).sub(&x3)).sub(&int(b));
    (x3, y3)
}

fn involution_square(id: &str, inv: Involution) -> Result<RationalReport> {
    match inv {
        Involution::Mobius([a, b, c, d]) => {
            let z = RationalExpr::mobius(X, a, b, c, d);
            let zz = z.compose(&[z.clone(), placeholder(), placeholder()])?;
            Ok(RationalReport::exact(id, zz.difference(&RationalExpr::var(X))))
        }
        Involution::Reflection { anchor } => {
            let (x1, y1) = reflection(anchor);
            let subs = [placeholder(), x1.clone(), y1.clone()];
            let x2 = x1.compose(&subs)?;
            let y2 = y1.compose(&subs)?;
            let dx = x2.difference(&RationalExpr::var(Y)).reduce_weierstrass(Y, W, 1);
            let dy = y2.difference(&RationalExpr::var(W)).reduce_weierstrass(Y, W, 1);
            Ok(RationalReport::exact(id, dx.add(&dy.mul(&MPoly::var(X)))))
        }
    }
}

/// Numerator of `A(x) * A(z(y)) - c` (or `A(x) + A(z(y)) - c`).
fn relation_numerator(t: &TowerSpec, z_of_next: &RationalExpr, next_vars: [RationalExpr; 3]) -> Result<MPoly> {
    let a = MPoly::from_x_coeffs(t.value_map);
    let ax = RationalExpr::poly(a.clone());
    let az = a.compose(&[z_of_next.clone(), next_vars[1].clone(), next_vars[2].clone()]);
    let expr = match t.relation {
        RelationKind::Product(c) => ax.mul(&az).sub(&int(c)),
        RelationKind::Sum(c) => ax.add(&az).sub(&int(c)),
    };
    Ok(expr.num)
}

fn phi_consistency(id: &str, t: &TowerSpec) -> Result<RationalReport> {
    match t.involution {
        Involution::Mobius([a, b, c, d]) => {
            let z = RationalExpr::mobius(Y, a, b, c, d);
            let num = relation_numerator(t, &z, [placeholder(), placeholder(), placeholder()])?;
            Ok(RationalReport::proportional(id, &num, &t.phi()))
        }
        Involution::Reflection { anchor } => {
            let (x1, _) = reflection(anchor);
            let num = relation_numerator(t, &x1, [placeholder(), RationalExpr::var(Y), RationalExpr::var(W)])?;
            let lhs = num.reduce_weierstrass(Y, W, 1);
            Ok(RationalReport::proportional(id, &lhs, &t.phi().reduce_weierstrass(Y, W, 1)))
        }
    }
}

fn equiv_form_3x2() -> Result<RationalReport> {
    let id = "equiv_form_3x2";
    let t = tower("x0_3x2")?;
    let z = RationalExpr::mobius(Y, -1, 3, 1, 1);
    let first = RationalExpr::poly(MPoly::from_x_coeffs(&[-1, 0, 1]))
        .mul(&z.pow(2).sub(&int(1)))
        .add(&int(8))
        .num;
    let second = MPoly::from_xy(&[(2, 1, 1), (2, 0, -1), (0, 2, -1), (0, 1, -3)]);
    let a = RationalReport::proportional(id, &first, &t.phi());
    if !a.passed() {
        return Ok(a);
    }
    Ok(RationalReport::proportional(id, &second, &t.phi()))
}

fn w3_commute() -> Result<RationalReport> {
    let t = tower("x0_3x2")?;
    let Some((_, Involution::Mobius([a, b, c, d]))) = t.aux_involutions.first().copied() else {
        return Err(Error::UnknownName("w3_commute".into()));
    };
    let subs = [RationalExpr::mobius(X, a, b, c, d), RationalExpr::mobius(Y, a, b, c, d), placeholder()];
    let moved = t.phi().compose(&subs).num;
    Ok(RationalReport::proportional("w3_commute", &moved, &t.phi()))
}
