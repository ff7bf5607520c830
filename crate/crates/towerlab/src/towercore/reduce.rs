use super::catalog::{BaseKind, TowerSpec};
use crate::error::{Error, Result};
use crate::qexpansion::rational::{MPoly, RationalExpr};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

/// Coordinate change applied to both sides of the relation before
/// reducing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `y = 1 - 1/x`, so `x = 1/(1 - y)`.
    OneMinusInverse,
    /// `y = 1/x - 1`, so `x = 1/(1 + y)`.
    InverseMinusOne,
}

impl Substitution {
    pub fn name(self) -> &'static str {
        match self {
            Substitution::OneMinusInverse => "y=1-1/x",
            Substitution::InverseMinusOne => "y=1/x-1",
        }
    }

    /// `x` as a function of the new coordinate in variable `v`.
    fn old_in_terms_of_new(self, v: usize) -> RationalExpr {
        match self {
            Substitution::OneMinusInverse => RationalExpr::mobius(v, 0, 1, -1, 1),
            Substitution::InverseMinusOne => RationalExpr::mobius(v, 0, 1, 1, 1),
        }
    }
}

/// A relation between consecutive coordinates `u = y_j`, `v = y_{j+1}`
/// over GF(p), scaled so its leading coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModpRelation {
    pub p: u64,
    terms: BTreeMap<(u32, u32), u64>,
}

impl ModpRelation {
    /// From integer entries `(i, j, c)` meaning `c u^i v^j`.
    pub fn from_table(p: u64, table: &[(u32, u32, i64)]) -> ModpRelation {
        let mut terms = BTreeMap::new();
        for &(i, j, c) in table {
            let e = terms.entry((i, j)).or_insert(0i64);
            *e = (*e + c).rem_euclid(p as i64);
        }
        ModpRelation { p, terms: terms.into_iter().filter(|t| t.1 != 0).map(|(k, c)| (k, c as u64)).collect() }
            .normalized()
    }

    fn normalized(mut self) -> ModpRelation {
        if let Some((_, &lead)) = self.terms.iter().next_back() {
            let inv = crate::finitefield::FieldCtx::prime(self.p)
                .ok()
                .and_then(|f| f.inv(f.from_int(lead as i64)))
                .map(|e| e.index() as u64)
                .unwrap_or(1);
            for c in self.terms.values_mut() {
                *c = *c * inv % self.p;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &u64)> {
        self.terms.iter()
    }
}

impl fmt::Display for ModpRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), &c)| {
                let mut vars = Vec::new();
                for (name, e) in [("u", i), ("v", j)] {
                    match e {
                        0 => {}
                        1 => vars.push(name.to_string()),
                        _ => vars.push(format!("{name}^{e}")),
                    }
                }
                match (c, vars.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => vars.join("*"),
                    _ => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{} = 0 (mod {})", parts.join(" + "), self.p)
    }
}

/// Rewrites the tower's relation in the coordinates `y = s(x)` on both
/// sides, clears denominators, removes monomial factors and reduces mod p.
pub fn reduce_mod_p(spec: &TowerSpec, p: u64, sub: Substitution) -> Result<ModpRelation> {
    if spec.base != BaseKind::ProjectiveLine {
        return Err(Error::UnsupportedReduction {
            tower: spec.name.into(),
            p,
            reason: "elliptic base curve".into(),
        });
    }
    crate::finitefield::FieldCtx::prime(p)?;
    if !spec.is_admissible(p) {
        return Err(Error::InadmissibleCharacteristic { tower: spec.name.into(), p });
    }
    let subs = [sub.old_in_terms_of_new(0), sub.old_in_terms_of_new(1), RationalExpr::int(0)];
    let num: MPoly = spec.phi().compose(&subs).num.primitive().strip_monomial();
    let pb = BigInt::from(p);
    let table: Vec<(u32, u32, i64)> = num
        .terms()
        .map(|(m, c)| {
            let r = c.numer().mod_floor(&pb).to_i64().expect("residue fits");
            (m[0], m[1], r)
        })
        .collect();
    let rel = ModpRelation::from_table(p, &table);
    if rel.is_zero() {
        return Err(Error::UnsupportedReduction {
            tower: spec.name.into(),
            p,
            reason: "relation vanishes identically".into(),
        });
    }
    Ok(rel)
}
