use super::series::{QSeries, GRID};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `eta(M tau) = q^(M/24) prod_{r >= 1} (1 - q^(M r))`, truncated at grid
/// exponent `prec`.
///
/// ```
/// use towerlab::qexpansion::{eta_series, GRID};
/// use num_rational::BigRational;
///
/// let eta = eta_series(1, 4 * GRID).unwrap();
/// let minus_one = BigRational::from_integer((-1).into());
/// assert_eq!(eta.coeff(1 + GRID), Some(minus_one.clone()));
/// assert_eq!(eta.coeff(1 + 2 * GRID), Some(minus_one));
/// ```
pub fn eta_series(m: u32, prec: i64) -> Result<QSeries> {
    if !(1..=36).contains(&m) {
        return Err(Error::BadMultiplier(m));
    }
    if prec < 2 * GRID {
        return Err(Error::PrecisionTooSmall(prec, 2 * GRID));
    }
    EtaQuotient::new(&[(m, 1)]).series(prec)
}

/// `shift + scale * prod eta(M tau)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub factors: Vec<(u32, i32)>,
    pub scale: BigRational,
    pub shift: BigRational,
}

impl EtaQuotient {
    pub fn new(factors: &[(u32, i32)]) -> EtaQuotient {
        EtaQuotient {
            factors: factors.to_vec(),
            scale: BigRational::one(),
            shift: BigRational::zero(),
        }
    }

    pub fn affine(mut self, scale: BigRational, shift: BigRational) -> EtaQuotient {
        self.scale = scale;
        self.shift = shift;
        self
    }

    /// Grid exponent of the leading term of the bare product: `sum r M`.
    pub fn leading_exponent(&self) -> i64 {
        self.factors.iter().map(|&(m, r)| m as i64 * r as i64).sum()
    }

    pub fn series(&self, prec: i64) -> Result<QSeries> {
        for &(m, _) in &self.factors {
            if !(1..=36).contains(&m) {
                return Err(Error::BadMultiplier(m));
            }
        }
        let lead = self.leading_exponent();
        let len = if prec > lead { ((prec - lead + GRID - 1) / GRID) as usize } else { 0 };
        let mut coeffs = vec![BigInt::zero(); len];
        if len > 0 {
            coeffs[0] = BigInt::one();
        }
        for &(m, r) in &self.factors {
            let m = m as usize;
            let mut step = m;
            while step < len {
                for _ in 0..r.unsigned_abs() {
                    if r > 0 {
                        // multiply by (1 - q^step)
                        for i in (step..len).rev() {
                            let t = coeffs[i - step].clone();
                            coeffs[i] -= t;
                        }
                    } else {
                        // multiply by 1/(1 - q^step)
                        for i in step..len {
                            let t = coeffs[i - step].clone();
                            coeffs[i] += t;
                        }
                    }
                }
                step += m;
            }
        }
        let product = QSeries::from_terms(
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (lead + i as i64 * GRID, BigRational::from_integer(c))),
            prec,
        );
        Ok(product.scale(&self.scale).add(&QSeries::constant(self.shift.clone(), prec)))
    }
}
