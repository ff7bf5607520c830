use super::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// A univariate polynomial over a finite field, constant term first.
/// Trailing zero coefficients are always stripped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.index() == 0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Integer coefficients mapped into the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| ctx.from_int(x)).collect())
    }

    /// `prod (X - r)` over the given roots.
    pub fn from_roots(ctx: &FieldCtx, roots: &[FieldElement]) -> UniPoly {
        roots.iter().fold(UniPoly::new(vec![ctx.one()]), |acc, &r| {
            acc.mul(ctx, &UniPoly::new(vec![ctx.neg(r), ctx.one()]))
        })
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::default();
        }
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Synthetic division by `X - r`: returns quotient and remainder.
    pub fn div_linear(&self, ctx: &FieldCtx, r: FieldElement) -> (UniPoly, FieldElement) {
        if self.is_zero() {
            return (UniPoly::default(), ctx.zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![ctx.zero(); n - 1];
        let mut carry = ctx.zero();
        for i in (0..n).rev() {
            let v = ctx.add(self.coeffs[i], ctx.mul(carry, r));
            if i == 0 {
                return (UniPoly::new(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

/// All roots in the field with multiplicities, in index order.
///
/// Roots are found by scanning the field; multiplicities by repeated
/// synthetic division.
pub fn uni_roots(ctx: &FieldCtx, f: &UniPoly) -> Result<Vec<(FieldElement, usize)>> {
    let Some(deg) = f.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if deg > 64 {
        return Err(Error::DegreeTooLarge(deg));
    }
    let mut out = Vec::new();
    if deg == 0 {
        return Ok(out);
    }
    let mut found = 0;
    for x in ctx.elements() {
        if f.eval(ctx, x).index() != 0 {
            continue;
        }
        let mut m = 0;
        let mut g = f.clone();
        loop {
            let (quot, rem) = g.div_linear(ctx, x);
            if rem.index() != 0 {
                break;
            }
            m += 1;
            g = quot;
        }
        out.push((x, m));
        found += m;
        if found == deg {
            break;
        }
    }
    Ok(out)
}
