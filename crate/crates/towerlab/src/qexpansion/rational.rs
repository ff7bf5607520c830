//! Exact polynomials and rational functions over the rationals in up to
//! three variables, enough to check the algebraic identities between the
//! modular coordinates symbolically.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 3;
pub type Monomial = [u32; NVARS];

const NAMES: [&str; NVARS] = ["x", "y", "w"];

/// Sparse polynomial in `x, y, w` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn constant(c: BigRational) -> MPoly {
        MPoly::from_terms([([0; NVARS], c)])
    }

    pub fn int(c: i64) -> MPoly {
        MPoly::constant(q(c))
    }

    pub fn one() -> MPoly {
        MPoly::int(1)
    }

    /// The variable with index `i` (0 = x, 1 = y, 2 = w).
    pub fn var(i: usize) -> MPoly {
        let mut m = [0; NVARS];
        m[i] = 1;
        MPoly::from_terms([(m, BigRational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Bivariate integer table: entries `(i, j, c)` mean `c x^i y^j`.
    pub fn from_xy(table: &[(u32, u32, i64)]) -> MPoly {
        MPoly::from_terms(table.iter().map(|&(i, j, c)| ([i, j, 0], q(c))))
    }

    /// Univariate in `x`, constant term first.
    pub fn from_x_coeffs(c: &[i64]) -> MPoly {
        MPoly::from_terms(c.iter().enumerate().map(|(i, &v)| ([i as u32, 0, 0], q(v))))
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == [0; NVARS])
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, x)| (*m, x * c)))
    }

    pub fn scale_int(&self, c: i64) -> MPoly {
        self.scale(&q(c))
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for i in 0..NVARS {
                    m[i] += mb[i];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Divides out the largest monomial dividing every term.
    pub fn strip_monomial(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = [u32::MAX; NVARS];
        for m in self.terms.keys() {
            for i in 0..NVARS {
                g[i] = g[i].min(m[i]);
            }
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut r = *m;
                    for i in 0..NVARS {
                        r[i] -= g[i];
                    }
                    (r, c.clone())
                })
                .collect(),
        }
    }

    /// Integer coefficients with content 1 and a positive leading term
    /// (leading in the monomial order, highest first).
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.terms.values().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|c| c.numer() * (&den / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
        let lead_neg = self.terms.values().next_back().is_some_and(|c| c.is_negative());
        let g = if lead_neg { -g } else { g };
        MPoly {
            terms: self.terms.keys().zip(ints).map(|(m, c)| (*m, BigRational::new(c, g.clone()))).collect(),
        }
    }

    /// `Some(c)` with `self = c * other`, `c != 0`, if such a scalar exists.
    pub fn scalar_ratio(&self, other: &MPoly) -> Option<BigRational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, c0) = self.terms.iter().next()?;
        let ratio = c0 / other.terms.get(m0)?;
        (self == &other.scale(&ratio)).then_some(ratio)
    }

    /// Substitutes `subs[i]` for variable `i`. Variables of degree 0 may be
    /// given any placeholder.
    pub fn compose(&self, subs: &[RationalExpr; NVARS]) -> RationalExpr {
        // Homogenise each variable separately so the result has a single
        // denominator prod den_i^deg_i instead of a sum of fractions.
        let degs: Vec<u32> = (0..NVARS).map(|i| self.degree_in(i)).collect();
        let pows = |p: &MPoly, n: u32| -> Vec<MPoly> {
            let mut v = vec![MPoly::one()];
            for _ in 0..n {
                let next = v.last().unwrap().mul(p);
                v.push(next);
            }
            v
        };
        let num_p: Vec<Vec<MPoly>> = (0..NVARS).map(|i| pows(&subs[i].num, degs[i])).collect();
        let den_p: Vec<Vec<MPoly>> = (0..NVARS).map(|i| pows(&subs[i].den, degs[i])).collect();
        let mut num = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for i in 0..NVARS {
                if degs[i] == 0 {
                    continue;
                }
                t = t.mul(&num_p[i][m[i] as usize]).mul(&den_p[i][(degs[i] - m[i]) as usize]);
            }
            num = num.add(&t);
        }
        let mut den = MPoly::one();
        for i in 0..NVARS {
            if degs[i] > 0 {
                den = den.mul(&den_p[i][degs[i] as usize]);
            }
        }
        RationalExpr { num, den }
    }

    /// Normal form modulo `y^2 - (x^3 + a)` (y-degree at most 1), for
    /// variables `(xv, yv)`.
    pub fn reduce_weierstrass(&self, xv: usize, yv: usize, a: i64) -> MPoly {
        let mut out = MPoly::zero();
        let mut work: Vec<(Monomial, BigRational)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            if m[yv] < 2 {
                out.add_term(m, c);
                continue;
            }
            // y^2 -> x^3 + a
            let mut m1 = m;
            m1[yv] -= 2;
            let mut m2 = m1;
            m2[xv] += 3;
            work.push((m2, c.clone()));
            work.push((m1, c * q(a)));
        }
        out
    }

    pub fn eval(&self, point: &[BigRational; NVARS]) -> BigRational {
        let mut s = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                for _ in 0..m[i] {
                    t *= &point[i];
                }
            }
            s += t;
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let vars: Vec<String> = (0..NVARS)
                .filter(|&v| m[v] > 0)
                .map(|v| if m[v] == 1 { NAMES[v].to_string() } else { format!("{}^{}", NAMES[v], m[v]) })
                .collect();
            if vars.is_empty() || !mag.is_one() {
                write!(f, "{mag}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `num / den` with `den != 0`. Not reduced: equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalExpr {
    pub num: MPoly,
    pub den: MPoly,
}

impl RationalExpr {
    pub fn new(num: MPoly, den: MPoly) -> Result<RationalExpr> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalExpr { num, den }.normalized())
    }

    pub fn poly(p: MPoly) -> RationalExpr {
        RationalExpr { num: p, den: MPoly::one() }
    }

    pub fn var(i: usize) -> RationalExpr {
        RationalExpr::poly(MPoly::var(i))
    }

    pub fn int(c: i64) -> RationalExpr {
        RationalExpr::poly(MPoly::int(c))
    }

    /// `(a v + b) / (c v + d)` in variable `v`.
    pub fn mobius(v: usize, a: i64, b: i64, c: i64, d: i64) -> RationalExpr {
        let x = MPoly::var(v);
        RationalExpr {
            num: x.scale(&q(a)).add(&MPoly::int(b)),
            den: x.scale(&q(c)).add(&MPoly::int(d)),
        }
        .normalized()
    }

    // Denominator primitive with positive leading coefficient.
    fn normalized(self) -> RationalExpr {
        let p = self.den.primitive();
        let ratio = p.scalar_ratio(&self.den).expect("primitive part is a scalar multiple");
        RationalExpr { num: self.num.scale(&ratio), den: p }
    }

    pub fn add(&self, o: &RationalExpr) -> RationalExpr {
        if self.den == o.den {
            return RationalExpr { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RationalExpr { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
            .normalized()
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RationalExpr) -> RationalExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalExpr) -> RationalExpr {
        RationalExpr { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn div(&self, o: &RationalExpr) -> Result<RationalExpr> {
        RationalExpr::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, n: u32) -> RationalExpr {
        RationalExpr { num: self.num.pow(n), den: self.den.pow(n) }.normalized()
    }

    /// Substitution into both numerator and denominator.
    pub fn compose(&self, subs: &[RationalExpr; NVARS]) -> Result<RationalExpr> {
        let n = self.num.compose(subs);
        let d = self.den.compose(subs);
        n.div(&d)
    }

    /// Cross-multiplied difference `num*o.den - o.num*den`; zero iff equal.
    pub fn difference(&self, o: &RationalExpr) -> MPoly {
        self.num.mul(&o.den).sub(&o.num.mul(&self.den))
    }
}

/// Univariate polynomial over the rationals, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    /// Reads a polynomial in `x` only.
    pub fn from_mpoly_x(p: &MPoly) -> Option<QPoly> {
        let mut c = vec![BigRational::zero(); p.degree_in(0) as usize + 1];
        for (m, v) in p.terms() {
            if m[1] != 0 || m[2] != 0 {
                return None;
            }
            c[m[0] as usize] = v.clone();
        }
        Some(QPoly::new(c))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                        - o.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut quot = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] / &d.0[dd];
            for (i, dc) in d.0.iter().enumerate() {
                let t = &c * dc;
                r[top - dd + i] -= t;
            }
            quot[top - dd] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (QPoly::new(quot), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        match self.0.last() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `(m, degree of the product of the
    /// irreducible factors with multiplicity exactly m)` for each `m` that
    /// occurs. Over an algebraic closure this is the multiset of root
    /// multiplicities.
    pub fn multiplicity_profile(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let mut a = f.gcd(&f.derivative());
        let mut b = f.div_rem(&a).0;
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let c = a.gcd(&b);
            let factor = b.div_rem(&c).0;
            if let Some(d) = factor.degree().filter(|&d| d > 0) {
                out.push((m, d));
            }
            b = c.clone();
            a = a.div_rem(&c).0;
            m += 1;
        }
        out
    }
}
