//! Ramification data of the Shimura curves over the triangle-group base:
//! the coordinate `J` with values `1, 0, inf` at the elliptic points and
//! the intermediate maps `J = t (4t - 3)^2`, `t = (xi^2 + 3)/4`.

use super::profile::{shimura_ram_index, RamificationProfile};
use crate::error::Result;
use crate::finitefield::FieldCtx;
use crate::qexpansion::rational::{MPoly, QPoly, RationalExpr};
use crate::towercore::{apply_involution, BasePoint, Involution};
use num_rational::BigRational;
use num_traits::Zero;

/// Orders of the elliptic points at `J = 1, 0, inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleData {
    pub name: &'static str,
    pub orders: [u64; 3],
}

pub const TRIANGLE_P2: TriangleData = TriangleData { name: "shimura_p2", orders: [2, 4, 12] };
pub const TRIANGLE_P3: TriangleData = TriangleData { name: "shimura_p3", orders: [2, 3, 9] };

const LABELS: [&str; 3] = ["J=1", "J=0", "J=inf"];

/// Orders of the points of `XX0(p2)` above each elliptic point of the
/// base, in the order `J = 1, 0, inf`.
pub fn p2_correspondence() -> [(u64, Vec<u64>); 3] {
    [(2, vec![1, 2]), (4, vec![2, 12]), (12, vec![4])]
}

/// The degree-3 profile of `XX0(p2) -> base` obtained from
/// [`p2_correspondence`] by the index rule.
pub fn p2_profile() -> Result<RamificationProfile> {
    let entries = p2_correspondence()
        .into_iter()
        .zip(LABELS)
        .map(|((e, above), label)| (label, above.iter().map(|&ep| shimura_ram_index(e, ep)).collect()));
    RamificationProfile::new(3, entries)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `J(t) = t (4t - 3)^2`.
pub fn j_of_t() -> MPoly {
    let t = MPoly::var(0);
    t.mul(&t.scale_int(4).sub(&MPoly::int(3)).pow(2))
}

/// `J(t) - 1 - (t - 1)(4t - 1)^2`; zero.
pub fn j_minus_one_residual() -> MPoly {
    let t = MPoly::var(0);
    let rhs = t.sub(&MPoly::one()).mul(&t.scale_int(4).sub(&MPoly::one()).pow(2));
    j_of_t().sub(&MPoly::one()).sub(&rhs)
}

/// `J` as a polynomial in `xi` via `t = (xi^2 + 3)/4`.
pub fn j_of_xi() -> MPoly {
    let t = RationalExpr::poly(MPoly::var(0).pow(2).add(&MPoly::int(3)).scale(&BigRational::new(1.into(), 4.into())));
    let z = RationalExpr::int(0);
    let r = j_of_t().compose(&[t, z.clone(), z]);
    r.num.scale(&(BigRational::from_integer(1.into()) / r.den.coeff(&[0, 0, 0])))
}

/// Profile of a polynomial map over the listed finite values and infinity.
pub fn polynomial_map_profile(f: &MPoly, values: &[(&str, i64)]) -> Result<RamificationProfile> {
    let poly = QPoly::from_mpoly_x(f).expect("univariate in x");
    let d = poly.degree().unwrap_or(0) as u64;
    let mut entries: Vec<(String, Vec<u64>)> = Vec::new();
    for &(label, c) in values {
        let shifted = poly.sub(&QPoly::new(vec![q(c)]));
        let mut idx = Vec::new();
        for (m, deg) in shifted.multiplicity_profile() {
            idx.extend(std::iter::repeat_n(m as u64, deg));
        }
        entries.push((label.to_string(), idx));
    }
    entries.push(("J=inf".to_string(), vec![d]));
    RamificationProfile::new(d, entries)
}

/// `XX0(p2) -> base` read off from `J(t)`.
pub fn t_profile() -> Result<RamificationProfile> {
    polynomial_map_profile(&j_of_t(), &[("J=1", 1), ("J=0", 0)])
}

/// `XX0(p2^2) -> base`, degree 6, read off from `J(xi)`.
pub fn xi_profile() -> Result<RamificationProfile> {
    polynomial_map_profile(&j_of_xi(), &[("J=1", 1), ("J=0", 0)])
}

type ProjQ = Option<BigRational>;

fn mobius_q([a, b, c, d]: [i64; 4], t: &ProjQ) -> ProjQ {
    let (num, den) = match t {
        Some(t) => (q(a) * t + q(b), q(c) * t + q(d)),
        None => (q(a), q(c)),
    };
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// `w1(t) = 3/(4t)`.
pub const W1: [i64; 4] = [0, 3, 4, 0];

/// True when `w1` swaps `{0, inf}` and `{1, 3/4}`.
pub fn w1_swaps_branch_pairs() -> bool {
    let zero = Some(q(0));
    let one = Some(q(1));
    let three_quarters = Some(BigRational::new(3.into(), 4.into()));
    mobius_q(W1, &zero).is_none()
        && mobius_q(W1, &None) == zero
        && mobius_q(W1, &one) == three_quarters
        && mobius_q(W1, &three_quarters) == one
}

/// `w2(xi) = (xi + 3)/(xi - 1)` over a field containing `sqrt(-3)`:
/// `Some(true)` when it fixes `-1` and swaps the two square roots, `None`
/// when `-3` is not a square in `ctx`.
pub fn w2_action(ctx: &FieldCtx) -> Option<bool> {
    let w2 = Involution::Mobius([1, 3, 1, -1]);
    let s = ctx.sqrt(ctx.from_int(-3))?;
    let pt = BasePoint::Affine;
    let m1 = pt(ctx.from_int(-1));
    Some(
        apply_involution(ctx, w2, m1) == m1
            && apply_involution(ctx, w2, pt(s)) == pt(ctx.neg(s))
            && apply_involution(ctx, w2, pt(ctx.neg(s))) == pt(s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::rh_genus;

    #[test]
    fn j_identities() {
        assert!(j_minus_one_residual().is_zero());
        // xi^4 (xi^2 + 3) / 4
        let xi = MPoly::var(0);
        let expected = xi.pow(4).mul(&xi.pow(2).add(&MPoly::int(3))).scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(j_of_xi(), expected);
    }

    #[test]
    fn correspondence_table_matches_j_of_t() {
        assert_eq!(p2_profile().unwrap(), t_profile().unwrap());
        assert_eq!(p2_profile().unwrap().above("J=inf"), Some(&[3u64][..]));
    }

    #[test]
    fn both_levels_are_rational() {
        assert_eq!(rh_genus(3, 0, &p2_profile().unwrap()).unwrap(), 0);
        let p = xi_profile().unwrap();
        assert_eq!(p.above("J=0"), Some(&[4u64, 1, 1][..]));
        assert_eq!(p.above("J=1"), Some(&[2u64, 2, 1, 1][..]));
        assert_eq!(rh_genus(6, 0, &p).unwrap(), 0);
    }

    #[test]
    fn involutions() {
        assert!(w1_swaps_branch_pairs());
        // -3 = 4 = 2^2 in GF(7)
        assert_eq!(w2_action(&FieldCtx::prime(7).unwrap()), Some(true));
        assert_eq!(w2_action(&FieldCtx::prime(5).unwrap()), None);
        assert_eq!(w2_action(&FieldCtx::new(5, 2).unwrap()), Some(true));
    }

    #[test]
    fn triangle_orders() {
        assert_eq!(TRIANGLE_P2.orders, [2, 4, 12]);
        assert_eq!(TRIANGLE_P3.orders, [2, 3, 9]);
        // the table lists orders drawn from the triangle
        for (e, above) in p2_correspondence() {
            assert!(TRIANGLE_P2.orders.contains(&e));
            assert!(above.iter().all(|x| *x == 1 || TRIANGLE_P2.orders.contains(x)));
        }
    }
}
