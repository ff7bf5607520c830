//! Arithmetic in GF(p^k) for `p^k <= 10^6`.
//!
//! Elements are stored by index: the element `c_0 + c_1 a + ... + c_{k-1} a^{k-1}`
//! (with `a` a root of the defining modulus) has index `sum c_i p^i`.
//! Multiplication goes through discrete log tables built from a primitive
//! element, so every operation is O(k) or better.
//!
//! ```
//! use towerlab::finitefield::FieldCtx;
//!
//! let f = FieldCtx::new(5, 2).unwrap();
//! assert_eq!(f.order(), 25);
//! assert_eq!(f.modulus(), &[2, 0, 1]); // x^2 + 2
//! let a = f.element(5).unwrap(); // the class of x
//! assert_eq!(f.mul(a, a), f.from_int(-2));
//! ```

mod modulus;
mod poly;

pub use poly::{uni_roots, UniPoly};
pub(crate) use modulus::is_prime;

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1_000_000;

/// An element of some [`FieldCtx`], identified by its index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete model of GF(p^k).
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q-1) so products of logs never need reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl FieldCtx {
    /// Builds GF(p^k). The modulus is the monic irreducible of degree k
    /// whose coefficient vector has the least index.
    pub fn new(p: u64, k: u32) -> Result<FieldCtx> {
        if !(1..=12).contains(&k) {
            return Err(Error::DegreeOutOfRange(k));
        }
        if !modulus::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, k });
        };
        let m = modulus::least_irreducible(p, k);
        let g = find_primitive(p, k, q, &m);

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let gpoly = modulus::digits(g, p, k as usize);
        let mut cur: Vec<u64> = vec![1];
        for i in 0..n {
            let mut d = cur.clone();
            d.resize(k as usize, 0);
            let idx = modulus::undigits(&d, p) as u32;
            exp[i] = idx;
            exp[i + n] = idx;
            log[idx as usize] = i as u32;
            cur = modulus::mul_mod(&cur, &gpoly, &m, p);
        }
        Ok(FieldCtx {
            p: p as u32,
            k,
            q: q as u32,
            modulus: m.iter().map(|&c| c as u32).collect(),
            exp,
            log,
        })
    }

    /// Shorthand for a prime field.
    pub fn prime(p: u64) -> Result<FieldCtx> {
        FieldCtx::new(p, 1)
    }

    /// The field of order `q`, if `q` is a prime power.
    pub fn of_order(q: u64) -> Result<FieldCtx> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        FieldCtx::new(p, k)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.exp[if self.q > 2 { 1 } else { 0 }])
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.q).then_some(FieldElement(index))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> FieldElement {
        let mut idx = 0u64;
        for &ci in c.iter().take(self.k as usize).rev() {
            idx = idx * self.p as u64 + (ci % self.p) as u64;
        }
        FieldElement(idx as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        modulus::digits(a.0 as u64, self.p as u64, self.k as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut w) = (0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * w;
            x /= self.p;
            y /= self.p;
            w = w.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let (mut out, mut w) = (0u32, 1u32);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * w;
            x /= self.p;
            w = w.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * (e % n) % n;
        FieldElement(self.exp[l as usize])
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Discrete log with respect to [`generator`](Self::generator).
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// One square root of `a`, if any.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return Some(a);
        }
        let l = self.log[a.0 as usize];
        if self.p == 2 {
            let n = self.q - 1;
            // Squaring is a bijection; halve the log mod the odd group order.
            let half = (l as u64 * (n as u64).div_ceil(2)) % n as u64;
            return Some(FieldElement(self.exp[half as usize]));
        }
        l.is_multiple_of(2).then(|| FieldElement(self.exp[(l / 2) as usize]))
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.sqrt(a).is_some()
    }
}

fn find_primitive(p: u64, k: u32, q: u64, m: &[u64]) -> u64 {
    if q == 2 {
        return 1;
    }
    let factors = modulus::prime_factors(q - 1);
    let m = m.to_vec();
    (1..q)
        .find(|&g| {
            let gp = modulus::digits(g, p, k as usize);
            factors.iter().all(|&r| {
                let h = modulus::pow_poly_mod(&gp, (q - 1) / r, &m, p);
                h != vec![1]
            })
        })
        .expect("the multiplicative group is cyclic")
}

/// Decomposes `q = p^k`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = modulus::prime_factors(q)[0];
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}
