use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent grid: a series exponent `e` stands for `q^(e/24)`.
pub const GRID: i64 = 24;

/// Precision used for exactly known series such as constants.
pub const EXACT: i64 = i64::MAX / 4;

/// A truncated Laurent series in `q^(1/24)` with rational coefficients.
///
/// `prec` is an absolute bound: every coefficient with grid exponent below
/// `prec` is known (and zero unless stored), nothing at or above it is.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<i64, BigRational>,
    prec: i64,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})q^({e}/24)")?;
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}/24))", self.prec)
    }
}

impl QSeries {
    pub fn zero(prec: i64) -> QSeries {
        QSeries { terms: BTreeMap::new(), prec }
    }

    pub fn constant(c: BigRational, prec: i64) -> QSeries {
        QSeries::monomial(0, c, prec)
    }

    pub fn one(prec: i64) -> QSeries {
        QSeries::constant(BigRational::one(), prec)
    }

    /// `c q^(e/24)`, truncated at `prec`.
    pub fn monomial(e: i64, c: BigRational, prec: i64) -> QSeries {
        QSeries::from_terms([(e, c)], prec)
    }

    /// Drops zero coefficients and anything at or beyond `prec`.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I, prec: i64) -> QSeries {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e < prec && !c.is_zero() {
                let slot = map.entry(e).or_insert_with(BigRational::zero);
                *slot += c;
                if slot.is_zero() {
                    map.remove(&e);
                }
            }
        }
        QSeries { terms: map, prec }
    }

    /// Convenience for integral exponents `q^n` and integer coefficients.
    pub fn from_int_terms(terms: &[(i64, i64)], prec: i64) -> QSeries {
        QSeries::from_terms(
            terms.iter().map(|&(n, c)| (n * GRID, BigRational::from_integer(c.into()))),
            prec,
        )
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Coefficient of `q^(e/24)`; `None` if it lies beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<BigRational> {
        (e < self.prec).then(|| self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Grid exponent of the first nonzero term.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// True if no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, prec: i64) -> QSeries {
        let prec = prec.min(self.prec);
        QSeries { terms: self.terms.range(..prec).map(|(&e, c)| (e, c.clone())).collect(), prec }
    }

    /// Like [`truncate`](Self::truncate) but fails if `prec` is not yet known.
    pub fn require(&self, prec: i64) -> Result<QSeries> {
        if self.prec < prec {
            return Err(Error::PrecisionLoss(self.prec, prec));
        }
        Ok(self.truncate(prec))
    }

    pub fn neg(&self) -> QSeries {
        QSeries { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        QSeries::from_terms(self.terms.iter().map(|(&e, x)| (e, x * c)), self.prec)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec.min(other.prec);
        QSeries::from_terms(
            self.terms.iter().chain(other.terms.iter()).map(|(&e, c)| (e, c.clone())),
            prec,
        )
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn add_constant(&self, c: &BigRational) -> QSeries {
        self.add(&QSeries::constant(c.clone(), self.prec))
    }

    // Effective valuation for precision bookkeeping: an unknown series
    // contributes its precision.
    fn val_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Product; precision is `min(prec_a + val_b, prec_b + val_a)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = (self.prec.saturating_add(other.val_or_prec()))
            .min(other.prec.saturating_add(self.val_or_prec()))
            .min(EXACT);
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(prec);
        }
        // Work over a common denominator so the inner loop is pure BigInt.
        let (da, a) = self.integral();
        let (db, b) = other.integral();
        let lo = a[0].0 + b[0].0;
        if prec <= lo {
            return QSeries::zero(prec);
        }
        let mut acc = vec![BigInt::zero(); (prec - lo) as usize];
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e = ea + eb;
                if e >= prec {
                    break;
                }
                acc[(e - lo) as usize] += ca * cb;
            }
        }
        let den = da * db;
        QSeries::from_terms(
            acc.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, BigRational::new(c, den.clone()))),
            prec,
        )
    }

    fn integral(&self) -> (BigInt, Vec<(i64, BigInt)>) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.numer() * (&den / c.denom())))
            .collect();
        (den, terms)
    }

    pub fn pow(&self, n: u32) -> QSeries {
        let mut result = QSeries::one(EXACT);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse. Precision becomes `prec - 2 * valuation`.
    /// Exact series (precision [`EXACT`]) must be truncated first.
    pub fn inverse(&self) -> Result<QSeries> {
        let v = self.valuation().ok_or(Error::NotInvertible)?;
        if self.prec >= EXACT / 2 {
            return Err(Error::NotInvertible);
        }
        let prec = self.prec - 2 * v;
        let lead = self.terms[&v].clone();
        let lead_inv = lead.recip();
        // Normalise to 1 + sum u_e q^(e/24), e > 0.
        let u: Vec<(i64, BigRational)> =
            self.terms.iter().skip(1).map(|(&e, c)| (e - v, c * &lead_inv)).collect();
        let rel = prec + v; // relative precision of the normalised inverse
        let mut b: BTreeMap<i64, BigRational> = BTreeMap::new();
        b.insert(0, BigRational::one());
        // Exponents of the inverse lie in the additive monoid generated by u.
        let mut frontier: Vec<i64> = vec![0];
        let mut known: std::collections::BTreeSet<i64> = [0].into();
        let mut idx = 0;
        while idx < frontier.len() {
            let e0 = frontier[idx];
            idx += 1;
            for (du, _) in &u {
                let e = e0 + du;
                if e < rel && known.insert(e) {
                    frontier.push(e);
                }
            }
        }
        for &e in &known {
            if e == 0 {
                continue;
            }
            let mut s = BigRational::zero();
            for (du, c) in &u {
                if *du > e {
                    break;
                }
                if let Some(bc) = b.get(&(e - du)) {
                    s -= c * bc;
                }
            }
            if !s.is_zero() {
                b.insert(e, s);
            }
        }
        Ok(QSeries::from_terms(b.into_iter().map(|(e, c)| (e - v, c * &lead_inv)), prec))
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.inverse()?))
    }

    /// The substitution `q -> q^m`.
    pub fn substitute(&self, m: u32) -> QSeries {
        let m = m as i64;
        QSeries {
            terms: self.terms.iter().map(|(&e, c)| (e * m, c.clone())).collect(),
            prec: self.prec.saturating_mul(m),
        }
    }

    /// Applies a polynomial with rational coefficients (constant first).
    pub fn eval_poly(&self, coeffs: &[BigRational]) -> QSeries {
        let mut acc = QSeries::zero(EXACT);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&QSeries::constant(c.clone(), EXACT));
        }
        acc
    }

    /// Largest absolute numerator or denominator among the coefficients.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}
