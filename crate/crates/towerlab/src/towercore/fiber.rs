use super::catalog::{BaseKind, Involution, RelationKind, TowerSpec};
use super::point::{elliptic, validate, BasePoint};
use crate::error::{Error, Result};
use crate::finitefield::{uni_roots, FieldCtx, FieldElement, UniPoly};

/// Points over a base point, with multiplicities. `unresolved` counts the
/// multiplicity carried by points that are not rational over the field.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Fiber {
    pub points: Vec<(BasePoint, u32)>,
    pub unresolved: u32,
}

impl Fiber {
    fn push(&mut self, p: BasePoint, m: u32) {
        if let Some(slot) = self.points.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += m;
        } else {
            self.points.push((p, m));
        }
    }

    fn sorted(mut self) -> Fiber {
        self.points.sort();
        self
    }

    /// Multiplicity including non-rational points; always `l`.
    pub fn total(&self) -> u32 {
        self.points.iter().map(|p| p.1).sum::<u32>() + self.unresolved
    }

    /// Multiplicity carried by rational points.
    pub fn rational_total(&self) -> u32 {
        self.points.iter().map(|p| p.1).sum()
    }

    pub fn contains(&self, q: &BasePoint) -> bool {
        self.points.iter().any(|(p, _)| p == q)
    }

    /// True when the fiber consists of `l` distinct rational points.
    pub fn splits_completely(&self, l: u32) -> bool {
        self.unresolved == 0 && self.points.len() == l as usize && self.points.iter().all(|p| p.1 == 1)
    }
}

fn mobius(ctx: &FieldCtx, [a, b, c, d]: [i64; 4], p: BasePoint) -> BasePoint {
    let (a, b, c, d) = (ctx.from_int(a), ctx.from_int(b), ctx.from_int(c), ctx.from_int(d));
    match p {
        BasePoint::Affine(x) => {
            let num = ctx.add(ctx.mul(a, x), b);
            let den = ctx.add(ctx.mul(c, x), d);
            match ctx.div(num, den) {
                Some(v) => BasePoint::Affine(v),
                None => BasePoint::Infinity,
            }
        }
        BasePoint::Infinity => match ctx.div(a, c) {
            Some(v) => BasePoint::Affine(v),
            None => BasePoint::Infinity,
        },
        other => other,
    }
}

/// Applies an involution description to a point.
pub fn apply_involution(ctx: &FieldCtx, inv: Involution, p: BasePoint) -> BasePoint {
    match inv {
        Involution::Mobius(m) => mobius(ctx, m, p),
        Involution::Reflection { anchor: (x, y) } => {
            let t = BasePoint::Curve(ctx.from_int(x), ctx.from_int(y));
            elliptic::sub(ctx, t, p)
        }
    }
}

/// The Atkin-Lehner involution `w` of the tower.
///
/// ```
/// use towerlab::finitefield::FieldCtx;
/// use towerlab::towercore::{apply_w, tower, BasePoint};
///
/// let ctx = FieldCtx::prime(7).unwrap();
/// let x0_2 = tower("x0_2").unwrap();
/// let three = BasePoint::Affine(ctx.from_int(3));
/// assert_eq!(apply_w(&x0_2, &ctx, three), three);
/// ```
pub fn apply_w(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> BasePoint {
    apply_involution(ctx, spec.involution, p)
}

fn value_poly(spec: &TowerSpec, ctx: &FieldCtx) -> UniPoly {
    UniPoly::from_ints(ctx, spec.value_map)
}

/// `A(P)` as a point of the projective line.
pub fn level_value(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> BasePoint {
    let a = value_poly(spec, ctx);
    match p {
        BasePoint::Affine(x) | BasePoint::Curve(x, _) => BasePoint::Affine(a.eval(ctx, x)),
        BasePoint::Infinity | BasePoint::Origin => BasePoint::Infinity,
    }
}

fn root_multiplicity(ctx: &FieldCtx, f: &UniPoly, r: FieldElement) -> u32 {
    let mut m = 0;
    let mut g = f.clone();
    loop {
        let (q, rem) = g.div_linear(ctx, r);
        if rem.index() != 0 || g.is_zero() {
            return m;
        }
        m += 1;
        g = q;
    }
}

/// Ramification index of the level map `A` at `P`.
pub fn value_index(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> u32 {
    let a = value_poly(spec, ctx);
    let deg = a.degree().unwrap_or(0) as u32;
    let at_x = |x: FieldElement| {
        let shifted = UniPoly::new(
            a.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| if i == 0 { ctx.sub(c, a.eval(ctx, x)) } else { c })
                .collect(),
        );
        root_multiplicity(ctx, &shifted, x)
    };
    match p {
        BasePoint::Affine(x) => at_x(x),
        BasePoint::Infinity => deg,
        BasePoint::Curve(x, y) => at_x(x) * if y.index() == 0 { 2 } else { 1 },
        BasePoint::Origin => 2 * deg,
    }
}

/// The map `v -> tau(v)` with `A(P) * A(w Q) = c` or `A(P) + A(w Q) = c`.
pub fn tau(spec: &TowerSpec, ctx: &FieldCtx, v: BasePoint) -> BasePoint {
    match (spec.relation, v) {
        (RelationKind::Product(_), BasePoint::Infinity) => BasePoint::Affine(ctx.zero()),
        (RelationKind::Product(c), BasePoint::Affine(a)) => match ctx.div(ctx.from_int(c), a) {
            Some(b) => BasePoint::Affine(b),
            None => BasePoint::Infinity,
        },
        (RelationKind::Sum(c), BasePoint::Affine(a)) => BasePoint::Affine(ctx.sub(ctx.from_int(c), a)),
        (_, other) => other,
    }
}

/// Points `R` with `A(R) = v`, with multiplicity `e_A(R)`.
pub fn preimages(spec: &TowerSpec, ctx: &FieldCtx, v: BasePoint) -> Result<Fiber> {
    let a = value_poly(spec, ctx);
    let d = a.degree().unwrap_or(0) as u32;
    let mut fiber = Fiber::default();
    let BasePoint::Affine(b) = v else {
        match spec.base {
            BaseKind::ProjectiveLine => fiber.push(BasePoint::Infinity, d),
            BaseKind::Elliptic => fiber.push(BasePoint::Origin, 2 * d),
        }
        return Ok(fiber);
    };
    let mut shifted: Vec<FieldElement> = a.coeffs().to_vec();
    shifted[0] = ctx.sub(shifted[0], b);
    let roots = uni_roots(ctx, &UniPoly::new(shifted))?;
    let found: u32 = roots.iter().map(|r| r.1 as u32).sum();
    match spec.base {
        BaseKind::ProjectiveLine => {
            for (x, m) in roots {
                fiber.push(BasePoint::Affine(x), m as u32);
            }
            fiber.unresolved = d - found;
        }
        BaseKind::Elliptic => {
            fiber.unresolved = 2 * (d - found);
            for (x, m) in roots {
                let m = m as u32;
                let rhs = ctx.add(ctx.pow(x, 3), ctx.one());
                if rhs.index() == 0 {
                    fiber.push(BasePoint::Curve(x, rhs), 2 * m);
                } else if let Some(y) = ctx.sqrt(rhs) {
                    fiber.push(BasePoint::Curve(x, y), m);
                    fiber.push(BasePoint::Curve(x, ctx.neg(y)), m);
                } else {
                    fiber.unresolved += 2 * m;
                }
            }
        }
    }
    Ok(fiber.sorted())
}

/// Successors of `P` computed from the level map: all `Q` with
/// `A(w Q) = tau(A(P))`.
pub fn relation_fiber(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> Result<Fiber> {
    let target = tau(spec, ctx, level_value(spec, ctx, p));
    let pre = preimages(spec, ctx, target)?;
    let mut out = Fiber { points: Vec::new(), unresolved: pre.unresolved };
    for (r, m) in pre.points {
        out.push(apply_w(spec, ctx, r), m);
    }
    Ok(out.sorted())
}

/// Coefficients `f_0..f_l` of the binary form `Phi(P; Y0, Y1) =
/// sum f_j Y0^j Y1^(l-j)` for a projective-line tower.
pub fn fiber_form(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> Vec<FieldElement> {
    let l = spec.l as usize;
    let mut f = vec![ctx.zero(); l + 1];
    for &(i, j, c) in spec.phi_table() {
        let term = match p {
            BasePoint::Affine(a) => ctx.mul(ctx.from_int(c), ctx.pow(a, i as u64)),
            _ if i as usize == l => ctx.from_int(c),
            _ => ctx.zero(),
        };
        f[j as usize] = ctx.add(f[j as usize], term);
    }
    f
}

fn phi_fiber(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> Result<Fiber> {
    let form = fiber_form(spec, ctx, p);
    let poly = UniPoly::new(form);
    let Some(deg) = poly.degree() else {
        return Err(Error::DegenerateFiber(p.label()));
    };
    let mut fiber = Fiber::default();
    let mut found = 0;
    if deg > 0 {
        for (y, m) in uni_roots(ctx, &poly)? {
            fiber.push(BasePoint::Affine(y), m as u32);
            found += m;
        }
    }
    let at_infinity = spec.l - deg as u32;
    if at_infinity > 0 {
        fiber.push(BasePoint::Infinity, at_infinity);
    }
    fiber.unresolved = (deg - found) as u32;
    Ok(fiber.sorted())
}

/// The fiber of the correspondence over `P`, total multiplicity `l`.
///
/// Projective-line towers use the roots of the bihomogeneous fiber form;
/// the elliptic tower solves `x(P)^3 - 8` against the level map directly.
pub fn neighbors(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> Result<Fiber> {
    spec.check_field(ctx)?;
    validate(spec, ctx, p)?;
    match spec.base {
        BaseKind::ProjectiveLine => phi_fiber(spec, ctx, p),
        BaseKind::Elliptic => relation_fiber(spec, ctx, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towercore::catalog::{catalog, tower};
    use crate::towercore::point::base_points;
    use num_traits::ToPrimitive;

    fn admissible_fields(spec: &TowerSpec, max_q: u64) -> Vec<FieldCtx> {
        (2..=max_q)
            .filter_map(|q| FieldCtx::of_order(q).ok())
            .filter(|f| spec.is_admissible(f.characteristic()))
            .collect()
    }

    #[test]
    fn x0_2_special_fibers() {
        let t = tower("x0_2").unwrap();
        for q in [5u64, 7, 9, 25] {
            let ctx = FieldCtx::of_order(q).unwrap();
            let one = BasePoint::Affine(ctx.one());
            assert_eq!(neighbors(&t, &ctx, one).unwrap().points, vec![(one, 2)]);
            let inf = neighbors(&t, &ctx, BasePoint::Infinity).unwrap();
            assert_eq!(inf.points, vec![(BasePoint::Affine(ctx.from_int(-1)), 1), (BasePoint::Infinity, 1)]);
        }
    }

    #[test]
    fn x0_2_over_gf5_total_multiplicity() {
        let t = tower("x0_2").unwrap();
        let ctx = FieldCtx::prime(5).unwrap();
        let fibers: Vec<Fiber> =
            base_points(&t, &ctx).into_iter().map(|p| neighbors(&t, &ctx, p).unwrap()).collect();
        assert_eq!(fibers.iter().map(Fiber::total).sum::<u32>(), 12);
        // Rational part, against a direct double loop over Phi(x, y) = 0.
        let phi = |x: FieldElement, y: FieldElement| -> FieldElement {
            let y1 = ctx.sub(y, ctx.one());
            let x2 = ctx.sub(ctx.mul(x, x), ctx.one());
            ctx.sub(ctx.mul(y1, y1), ctx.mul(ctx.from_int(8), ctx.mul(x2, ctx.add(y, ctx.one()))))
        };
        let mut distinct = 0;
        for x in ctx.elements() {
            for y in ctx.elements() {
                distinct += (phi(x, y).index() == 0) as usize;
            }
        }
        // the y^2 coefficient is 1, so infinity only pairs as (inf, inf), (inf, -1)
        distinct += 2;
        let dp: usize = fibers.iter().map(|f| f.points.len()).sum();
        assert_eq!(dp, distinct);
        // P = 2, 3: y^2 + 4y + 2 is irreducible, fibers entirely non-rational.
        for x in [2, 3] {
            let f = neighbors(&t, &ctx, BasePoint::Affine(ctx.from_int(x))).unwrap();
            assert_eq!(f.unresolved, 2);
        }
        assert_eq!(fibers.iter().map(Fiber::rational_total).sum::<u32>(), 8);
    }

    #[test]
    fn fiber_completeness_for_all_towers_up_to_121() {
        for t in catalog() {
            for ctx in admissible_fields(&t, 121) {
                for p in base_points(&t, &ctx) {
                    let f = neighbors(&t, &ctx, p).unwrap();
                    assert_eq!(f.total(), t.l, "{} over {:?} at {}", t.name, ctx, p.label());
                }
            }
        }
    }

    #[test]
    fn phi_route_matches_relation_route() {
        for t in catalog().into_iter().filter(|t| t.base == BaseKind::ProjectiveLine) {
            for ctx in admissible_fields(&t, 49) {
                for p in base_points(&t, &ctx) {
                    assert_eq!(
                        phi_fiber(&t, &ctx, p).unwrap(),
                        relation_fiber(&t, &ctx, p).unwrap(),
                        "{} over {:?} at {}",
                        t.name,
                        ctx,
                        p.label()
                    );
                }
            }
        }
    }

    #[test]
    fn elliptic_neighbors_satisfy_the_polynomial_relation() {
        let t = tower("x0_6").unwrap();
        let phi = t.phi();
        for q in [5u64, 7, 13, 25] {
            let ctx = FieldCtx::of_order(q).unwrap();
            let two = ctx.from_int(2);
            let eval = |x: FieldElement, bx: FieldElement, by: FieldElement| {
                let mut s = ctx.zero();
                for (m, c) in phi.terms() {
                    let c = c.numer().to_i64().unwrap();
                    let t = ctx.mul(
                        ctx.from_int(c),
                        ctx.mul(ctx.pow(x, m[0] as u64), ctx.mul(ctx.pow(bx, m[1] as u64), ctx.pow(by, m[2] as u64))),
                    );
                    s = ctx.add(s, t);
                }
                s
            };
            let pts = base_points(&t, &ctx);
            for &p in &pts {
                let BasePoint::Curve(x, _) = p else { continue };
                let fib = neighbors(&t, &ctx, p).unwrap();
                for &r in &pts {
                    let BasePoint::Curve(bx, by) = r else { continue };
                    if bx == two {
                        continue;
                    }
                    let on_phi = eval(x, bx, by).index() == 0;
                    assert_eq!(on_phi, fib.contains(&r), "q = {q}, P = {}, Q = {}", p.label(), r.label());
                }
            }
        }
    }

    #[test]
    fn w_of_origin_is_the_anchor() {
        let t = tower("x0_6").unwrap();
        let ctx = FieldCtx::prime(7).unwrap();
        assert_eq!(apply_w(&t, &ctx, BasePoint::Origin), BasePoint::Curve(ctx.from_int(2), ctx.from_int(3)));
    }

    #[test]
    fn involutions_square_to_identity() {
        for t in catalog() {
            for ctx in admissible_fields(&t, 49) {
                let mut invs = vec![t.involution];
                invs.extend(t.aux_involutions.iter().map(|a| a.1));
                for p in base_points(&t, &ctx) {
                    for &inv in &invs {
                        let once = apply_involution(&ctx, inv, p);
                        assert_eq!(apply_involution(&ctx, inv, once), p, "{}", t.name);
                    }
                }
            }
        }
    }

    #[test]
    fn inadmissible_field_is_rejected() {
        let t = tower("x0_3x2").unwrap();
        let ctx = FieldCtx::prime(3).unwrap();
        assert!(matches!(
            neighbors(&t, &ctx, BasePoint::Infinity),
            Err(Error::InadmissibleCharacteristic { .. })
        ));
    }
}
