use crate::error::{Error, Result};
use num_integer::Integer;
use std::collections::BTreeMap;

/// Ramification indices above each branch point of a degree-`d` cover.
/// Unlisted points are unramified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    degree: u64,
    above: BTreeMap<String, Vec<u64>>,
}

impl RamificationProfile {
    pub fn new<S: Into<String>>(degree: u64, entries: impl IntoIterator<Item = (S, Vec<u64>)>) -> Result<Self> {
        let mut above = BTreeMap::new();
        for (label, mut idx) in entries {
            let label = label.into();
            let sum: u64 = idx.iter().sum();
            if idx.contains(&0) || sum != degree {
                return Err(Error::InconsistentProfile(format!(
                    "indices {idx:?} above {label} do not sum to {degree}"
                )));
            }
            idx.sort_unstable_by(|a, b| b.cmp(a));
            if above.insert(label.clone(), idx).is_some() {
                return Err(Error::InconsistentProfile(format!("{label} listed twice")));
            }
        }
        Ok(RamificationProfile { degree, above })
    }

    /// A profile with no branch points.
    pub fn unramified(degree: u64) -> Self {
        RamificationProfile { degree, above: BTreeMap::new() }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn above(&self, label: &str) -> Option<&[u64]> {
        self.above.get(label).map(Vec::as_slice)
    }

    pub fn branch_points(&self) -> impl Iterator<Item = (&str, &[u64])> {
        self.above.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// `sum (e - 1)` over every point above every branch point.
    pub fn different_degree(&self) -> u64 {
        self.above.values().flatten().map(|e| e - 1).sum()
    }

    /// All indices prime to `p`.
    pub fn is_tame(&self, p: u64) -> bool {
        self.above.values().flatten().all(|e| e % p != 0)
    }
}

/// Riemann-Hurwitz: `2g - 2 = d (2 g_base - 2) + sum (e - 1)`.
///
/// ```
/// use towerlab::geometry::{rh_genus, RamificationProfile};
///
/// let p = RamificationProfile::new(2, [("0", vec![2]), ("inf", vec![2])]).unwrap();
/// assert_eq!(rh_genus(2, 0, &p).unwrap(), 0);
/// ```
pub fn rh_genus(d: u64, g_base: u64, profile: &RamificationProfile) -> Result<u64> {
    if profile.degree != d {
        return Err(Error::InconsistentProfile(format!("profile has degree {}, cover has {d}", profile.degree)));
    }
    rh_from_different(d, g_base, profile.different_degree() as i128)
}

/// Riemann-Hurwitz from the degree of the different alone.
pub fn rh_from_different(d: u64, g_base: u64, r: i128) -> Result<u64> {
    let two_g_minus_two = d as i128 * (2 * g_base as i128 - 2) + r;
    if two_g_minus_two.is_odd() {
        return Err(Error::NonIntegralGenus);
    }
    let g = two_g_minus_two / 2 + 1;
    u64::try_from(g).map_err(|_| Error::NegativeGenus)
}

/// Index of a point of order `e_prime` above an elliptic point of order
/// `e`: the denominator of `e_prime / e`.
pub fn shimura_ram_index(e: u64, e_prime: u64) -> u64 {
    e / e.gcd(&e_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degree_three_triangle_profile() {
        let p = RamificationProfile::new(3, [("inf", vec![3]), ("0", vec![2, 1]), ("1", vec![2, 1])]).unwrap();
        assert_eq!(p.different_degree(), 4);
        assert_eq!(rh_genus(3, 0, &p).unwrap(), 0);
    }

    #[test]
    fn inconsistent_profiles() {
        assert!(RamificationProfile::new(3, [("0", vec![2])]).is_err());
        assert!(RamificationProfile::new(2, [("0", vec![2, 0])]).is_err());
        let p = RamificationProfile::new(2, [("0", vec![2])]).unwrap();
        assert_eq!(rh_genus(2, 0, &p), Err(Error::NonIntegralGenus));
        assert!(rh_genus(3, 0, &p).is_err());
    }

    #[test]
    fn negative_genus() {
        // a degree-2 unramified cover of P^1 does not exist
        assert_eq!(rh_genus(2, 0, &RamificationProfile::unramified(2)), Err(Error::NegativeGenus));
    }

    #[test]
    fn index_rule() {
        assert_eq!(shimura_ram_index(12, 4), 3);
        assert_eq!(shimura_ram_index(4, 12), 1);
        assert_eq!(shimura_ram_index(1, 1), 1);
        assert_eq!(shimura_ram_index(4, 2), 2);
    }

    #[test]
    fn tameness() {
        let p = RamificationProfile::new(3, [("inf", vec![3])]).unwrap();
        assert!(p.is_tame(101));
        assert!(!p.is_tame(3));
    }

    proptest! {
        #[test]
        fn unramified_double_cover(g in 1u64..1000) {
            prop_assert_eq!(rh_genus(2, g, &RamificationProfile::unramified(2)).unwrap(), 2 * g - 1);
        }

        #[test]
        fn unramified_recursion(l in 2u64..7, g in 1u64..1000) {
            let g1 = rh_genus(l, g, &RamificationProfile::unramified(l)).unwrap();
            prop_assert_eq!(g1 - 1, l * (g - 1));
        }
    }
}
