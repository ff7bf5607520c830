use super::catalog::{BaseKind, TowerSpec};
use crate::error::{Error, Result};
use crate::finitefield::{FieldCtx, FieldElement};
use serde_json::{json, Value};

/// A rational point of the base curve.
///
/// The derived order (affine points by index, then infinity) is the
/// deterministic output order everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePoint {
    /// `(a : 1)` on the projective line.
    Affine(FieldElement),
    /// `(1 : 0)` on the projective line.
    Infinity,
    /// `(x, y)` with `y^2 = x^3 + 1`.
    Curve(FieldElement, FieldElement),
    /// The identity of the elliptic curve.
    Origin,
}

impl BasePoint {
    pub fn kind(&self) -> BaseKind {
        match self {
            BasePoint::Affine(_) | BasePoint::Infinity => BaseKind::ProjectiveLine,
            BasePoint::Curve(..) | BasePoint::Origin => BaseKind::Elliptic,
        }
    }

    /// JSON encoding: `[num, den]` on the line, `[x, y, 1]` on the curve,
    /// and `"inf"` for either point at infinity. Field elements are written
    /// as their index.
    pub fn to_json(&self) -> Value {
        match *self {
            BasePoint::Affine(a) => json!([a.index(), 1]),
            BasePoint::Infinity | BasePoint::Origin => json!("inf"),
            BasePoint::Curve(x, y) => json!([x.index(), y.index(), 1]),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            BasePoint::Affine(a) => a.to_string(),
            BasePoint::Infinity | BasePoint::Origin => "inf".to_string(),
            BasePoint::Curve(x, y) => format!("({x},{y})"),
        }
    }
}

/// `y^2 = x^3 + 1`
pub fn on_curve(ctx: &FieldCtx, x: FieldElement, y: FieldElement) -> bool {
    ctx.mul(y, y) == ctx.add(ctx.pow(x, 3), ctx.one())
}

/// Checks that `p` lies on the base curve of `spec`.
pub fn validate(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> Result<()> {
    let ok = match (spec.base, p) {
        (BaseKind::ProjectiveLine, BasePoint::Affine(a)) => a.index() < ctx.order() as u32,
        (BaseKind::ProjectiveLine, BasePoint::Infinity) => true,
        (BaseKind::Elliptic, BasePoint::Curve(x, y)) => on_curve(ctx, x, y),
        (BaseKind::Elliptic, BasePoint::Origin) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidChain(format!("{} is not on the base curve of {}", p.label(), spec.name)))
    }
}

/// All rational points of the base curve, sorted.
pub fn base_points(spec: &TowerSpec, ctx: &FieldCtx) -> Vec<BasePoint> {
    match spec.base {
        BaseKind::ProjectiveLine => {
            ctx.elements().map(BasePoint::Affine).chain(std::iter::once(BasePoint::Infinity)).collect()
        }
        BaseKind::Elliptic => {
            let mut out = Vec::new();
            for x in ctx.elements() {
                let rhs = ctx.add(ctx.pow(x, 3), ctx.one());
                if let Some(y) = ctx.sqrt(rhs) {
                    out.push(BasePoint::Curve(x, y));
                    let ny = ctx.neg(y);
                    if ny != y {
                        out.push(BasePoint::Curve(x, ny));
                    }
                }
            }
            out.push(BasePoint::Origin);
            out.sort();
            out
        }
    }
}

/// Group law on `y^2 = x^3 + 1` (characteristic not 2 or 3).
pub mod elliptic {
    use super::BasePoint::{self, Curve, Origin};
    use crate::finitefield::FieldCtx;

    pub fn neg(ctx: &FieldCtx, p: BasePoint) -> BasePoint {
        match p {
            Curve(x, y) => Curve(x, ctx.neg(y)),
            other => other,
        }
    }

    pub fn add(ctx: &FieldCtx, p: BasePoint, q: BasePoint) -> BasePoint {
        let (Curve(x1, y1), Curve(x2, y2)) = (p, q) else {
            return if p == Origin { q } else { p };
        };
        let lambda = if x1 == x2 {
            if ctx.add(y1, y2).index() == 0 {
                return Origin;
            }
            // tangent slope 3x^2 / 2y
            let num = ctx.mul(ctx.from_int(3), ctx.mul(x1, x1));
            ctx.div(num, ctx.add(y1, y1)).expect("y != 0 here")
        } else {
            ctx.div(ctx.sub(y2, y1), ctx.sub(x2, x1)).expect("x1 != x2")
        };
        let x3 = ctx.sub(ctx.sub(ctx.mul(lambda, lambda), x1), x2);
        let y3 = ctx.sub(ctx.mul(lambda, ctx.sub(x1, x3)), y1);
        Curve(x3, y3)
    }

    pub fn sub(ctx: &FieldCtx, p: BasePoint, q: BasePoint) -> BasePoint {
        add(ctx, p, neg(ctx, q))
    }
}
