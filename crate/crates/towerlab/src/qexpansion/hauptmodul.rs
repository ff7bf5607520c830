use super::eta::EtaQuotient;
use super::series::{QSeries, GRID};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::One;

/// Names accepted by [`hauptmodul_series`], in registry order.
pub const HAUPTMODUL_NAMES: [&str; 13] = [
    "xi4", "h2", "xi9", "h3", "xi25", "h5", "xi16", "h4", "xi36", "gamma36", "h6", "h6p", "xi12",
];

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The eta-quotient behind a registered coordinate.
pub fn hauptmodul_quotient(name: &str) -> Result<EtaQuotient> {
    let q = |f: &[(u32, i32)]| EtaQuotient::new(f);
    let one = BigRational::one();
    Ok(match name {
        "xi4" => q(&[(1, 8), (4, -8)]).affine(frac(1, 8), one),
        "h2" => q(&[(1, 24), (2, -24)]),
        "xi9" => q(&[(1, 3), (9, -3)]).affine(frac(1, 3), one),
        "h3" => q(&[(1, 12), (3, -12)]),
        "xi25" => q(&[(1, 1), (25, -1)]).affine(one.clone(), one),
        "h5" => q(&[(1, 6), (5, -6)]),
        "xi16" => q(&[(1, 2), (8, 1), (2, -1), (16, -2)]).affine(frac(1, 2), one),
        "h4" => q(&[(1, 8), (4, -8)]),
        "xi36" => q(&[(12, 1), (18, 3), (6, -1), (36, -3)]),
        "gamma36" => q(&[(12, 4), (18, 2), (6, -2), (36, -4)]),
        "h6" => q(&[(1, 5), (3, 1), (2, -1), (6, -5)]),
        "h6p" => q(&[(2, 3), (3, 9), (1, -3), (6, -9)]),
        "xi12" => q(&[(4, 4), (6, 2), (2, -2), (12, -4)]),
        _ => return Err(Error::UnknownName(name.to_string())),
    })
}

/// Expansion of a registered Hauptmodul (or auxiliary coordinate) to grid
/// precision `prec >= 240`.
pub fn hauptmodul_series(name: &str, prec: i64) -> Result<QSeries> {
    let quotient = hauptmodul_quotient(name)?;
    if prec < 10 * GRID {
        return Err(Error::PrecisionTooSmall(prec, 10 * GRID));
    }
    quotient.series(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: i64 = 45 * GRID;

    fn s(name: &str) -> QSeries {
        hauptmodul_series(name, P).unwrap()
    }

    /// Nonzero coefficients as (q-exponent, value), scaled by `k`.
    fn scaled(name: &str, k: i64, count: usize) -> Vec<(i64, BigRational)> {
        s(name)
            .terms()
            .take(count)
            .map(|(e, c)| (e / GRID, c * BigRational::from_integer(k.into())))
            .collect()
    }

    fn ints(v: &[(i64, i64)]) -> Vec<(i64, BigRational)> {
        v.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))).collect()
    }

    #[test]
    fn unknown_name() {
        assert_eq!(hauptmodul_series("h7", P), Err(Error::UnknownName("h7".into())));
        assert_eq!(hauptmodul_series("h2", 239), Err(Error::PrecisionTooSmall(239, 240)));
    }

    #[test]
    fn integral_exponents() {
        for name in HAUPTMODUL_NAMES {
            let q = hauptmodul_quotient(name).unwrap();
            assert_eq!(q.leading_exponent() % GRID, 0, "{name}");
            assert!(s(name).terms().all(|(e, _)| e % GRID == 0), "{name}");
        }
    }

    #[test]
    fn leading_terms() {
        assert_eq!(scaled("h3", 1, 6), ints(&[(-1, 1), (0, -12), (1, 54), (2, -76), (3, -243), (4, 1188)]));
        assert_eq!(scaled("h5", 1, 7), ints(&[(-1, 1), (0, -6), (1, 9), (2, 10), (3, -30), (4, 6), (5, -25)]));
        assert_eq!(scaled("h4", 1, 6), ints(&[(-1, 1), (0, -8), (1, 20), (3, -62), (5, 216), (7, -641)]));
        assert_eq!(scaled("xi4", 8, 5), ints(&[(-1, 1), (1, 20), (3, -62), (5, 216), (7, -641)]));
        assert_eq!(scaled("xi16", 2, 6), ints(&[(-1, 1), (3, 2), (7, -1), (11, -2), (15, 3), (19, 2)]));
        assert_eq!(
            scaled("xi25", 1, 9),
            ints(&[(-1, 1), (1, -1), (4, 1), (6, 1), (11, -1), (14, -1), (21, 1), (24, 1), (26, -1)])
        );
    }

    #[test]
    fn h6p_and_h6_differ_by_eight() {
        let d = s("h6p").sub(&s("h6"));
        assert_eq!(d, QSeries::from_int_terms(&[(0, 8)], P));
    }
}
