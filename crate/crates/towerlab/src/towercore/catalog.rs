use crate::error::{Error, Result};
use crate::finitefield::FieldCtx;
use crate::qexpansion::rational::MPoly;

/// The curve every level-1 coordinate lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    ProjectiveLine,
    /// `y^2 = x^3 + 1`
    Elliptic,
}

/// Atkin-Lehner involution on the base curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `x -> (a x + b) / (c x + d)`
    Mobius([i64; 4]),
    /// `P -> T - P`
    Reflection { anchor: (i64, i64) },
}

/// How consecutive values of the level map are tied together:
/// `A(P_j) * A(w(P_{j+1})) = c` or `A(P_j) + A(w(P_{j+1})) = c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Product(i64),
    Sum(i64),
}

/// Which modular tower a spec models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularLabel {
    /// The classical curves `X0(n0 * l^n)`, `n >= 1`.
    Classical { n0: u64, l: u64 },
    /// Shimura curves `XX0(p^n)` for the prime `p` above `l` in `Q(sqrt -3)`.
    Shimura { l: u64 },
}

impl ModularLabel {
    pub fn describe(&self, n: u32) -> String {
        match *self {
            ModularLabel::Classical { n0, l } => format!("X0({})", n0 * l.pow(n)),
            ModularLabel::Shimura { l } => format!("XX0(p{l}^{n})"),
        }
    }

    /// Level of tower curve `n` for the classical towers.
    pub fn classical_level(&self, n: u32) -> Option<u64> {
        match *self {
            ModularLabel::Classical { n0, l } => n0.checked_mul(l.checked_pow(n)?),
            ModularLabel::Shimura { .. } => None,
        }
    }
}

/// One of the eight recursive towers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub name: &'static str,
    pub l: u32,
    pub base: BaseKind,
    /// `A(X)` (constant term first), applied to the x-coordinate on the
    /// elliptic base.
    pub value_map: &'static [i64],
    pub involution: Involution,
    pub relation: RelationKind,
    pub aux_involutions: &'static [(&'static str, Involution)],
    pub excluded: &'static [u64],
    pub label: ModularLabel,
    /// Primes dividing the level, for the classical towers; for Shimura
    /// towers the residue characteristic of the prime and the ramified
    /// primes of the quaternion algebra.
    pub level_primes: &'static [u64],
    /// `(i, j, c)`: `c x^i y^j` in the cleared relation between consecutive
    /// coordinates. Empty for the elliptic tower, see [`TowerSpec::phi`].
    phi_table: &'static [(u32, u32, i64)],
}

// Tables below were expanded by hand from the defining relations; the
// symbolic check `phi_consistency_*` re-derives each one.

const PHI_X0_2: &[(u32, u32, i64)] = &[(0, 2, 1), (0, 1, 6), (0, 0, 9), (2, 1, -8), (2, 0, -8)];

const PHI_X0_3: &[(u32, u32, i64)] =
    &[(3, 2, 9), (3, 1, 9), (3, 0, 9), (0, 3, -1), (0, 2, -6), (0, 1, -12), (0, 0, -8)];

const PHI_X0_4: &[(u32, u32, i64)] =
    &[(4, 3, 8), (4, 1, 8), (0, 4, -1), (0, 3, -4), (0, 2, -6), (0, 1, -4), (0, 0, -1)];

// P(x) (y^4 + y^3 + 6y^2 + 6y + 11) - (y - 1)^5
const PHI_X0_5: &[(u32, u32, i64)] = &[
    (5, 4, 1), (5, 3, 1), (5, 2, 6), (5, 1, 6), (5, 0, 11),
    (3, 4, 5), (3, 3, 5), (3, 2, 30), (3, 1, 30), (3, 0, 55),
    (1, 4, 5), (1, 3, 5), (1, 2, 30), (1, 1, 30), (1, 0, 55),
    (0, 5, -1), (0, 4, -6), (0, 3, -21), (0, 2, -56), (0, 1, -71), (0, 0, -120),
];

// (y - 1) x^2 - y^2 - 3y
const PHI_X0_3X2: &[(u32, u32, i64)] = &[(2, 1, 1), (2, 0, -1), (0, 2, -1), (0, 1, -3)];

// (x^2 + 3)(y^2 + 3) - 3(y - 1)^2
const PHI_SHIMURA_P2: &[(u32, u32, i64)] = &[(2, 2, 1), (2, 0, 3), (0, 1, 6), (0, 0, 6)];

// x^3 (y - 1)^3 + 9(y^2 + y + 1)
const PHI_SHIMURA_P3: &[(u32, u32, i64)] =
    &[(3, 3, 1), (3, 2, -3), (3, 1, 3), (3, 0, -1), (0, 2, 9), (0, 1, 9), (0, 0, 9)];

const W3: Involution = Involution::Mobius([0, -3, 1, 0]);

/// All eight towers in a fixed order.
pub fn catalog() -> Vec<TowerSpec> {
    use BaseKind::*;
    use Involution::*;
    use RelationKind::*;
    vec![
        TowerSpec {
            name: "x0_2",
            l: 2,
            base: ProjectiveLine,
            value_map: &[-1, 0, 1],
            involution: Mobius([1, 3, 1, -1]),
            relation: Product(1),
            aux_involutions: &[],
            excluded: &[2],
            label: ModularLabel::Classical { n0: 1, l: 2 },
            level_primes: &[2],
            phi_table: PHI_X0_2,
        },
        TowerSpec {
            name: "x0_3",
            l: 3,
            base: ProjectiveLine,
            value_map: &[-1, 0, 0, 1],
            involution: Mobius([1, 2, 1, -1]),
            relation: Product(1),
            aux_involutions: &[],
            excluded: &[3],
            label: ModularLabel::Classical { n0: 1, l: 3 },
            level_primes: &[3],
            phi_table: PHI_X0_3,
        },
        TowerSpec {
            name: "x0_4",
            l: 4,
            base: ProjectiveLine,
            value_map: &[-1, 0, 0, 0, 1],
            involution: Mobius([1, 1, 1, -1]),
            relation: Product(1),
            aux_involutions: &[],
            excluded: &[2],
            label: ModularLabel::Classical { n0: 1, l: 4 },
            level_primes: &[2],
            phi_table: PHI_X0_4,
        },
        TowerSpec {
            name: "x0_5",
            l: 5,
            base: ProjectiveLine,
            value_map: &[-11, 5, 0, 5, 0, 1],
            involution: Mobius([1, 4, 1, -1]),
            relation: Product(125),
            aux_involutions: &[],
            excluded: &[5],
            label: ModularLabel::Classical { n0: 1, l: 5 },
            level_primes: &[5],
            phi_table: PHI_X0_5,
        },
        TowerSpec {
            name: "x0_6",
            l: 6,
            base: Elliptic,
            value_map: &[-8, 0, 0, 1],
            involution: Reflection { anchor: (2, 3) },
            relation: Product(72),
            aux_involutions: &[],
            excluded: &[2, 3],
            label: ModularLabel::Classical { n0: 1, l: 6 },
            level_primes: &[2, 3],
            phi_table: &[],
        },
        TowerSpec {
            name: "x0_3x2",
            l: 2,
            base: ProjectiveLine,
            value_map: &[-1, 0, 1],
            involution: Mobius([-1, 3, 1, 1]),
            relation: Product(-8),
            aux_involutions: &[("w3", W3)],
            excluded: &[2, 3],
            label: ModularLabel::Classical { n0: 3, l: 2 },
            level_primes: &[2, 3],
            phi_table: PHI_X0_3X2,
        },
        TowerSpec {
            name: "shimura_p2",
            l: 2,
            base: ProjectiveLine,
            value_map: &[3, 0, 1],
            involution: Mobius([1, 3, 1, -1]),
            relation: Product(12),
            aux_involutions: &[],
            excluded: &[2, 3],
            label: ModularLabel::Shimura { l: 2 },
            level_primes: &[2, 3],
            phi_table: PHI_SHIMURA_P2,
        },
        TowerSpec {
            name: "shimura_p3",
            l: 3,
            base: ProjectiveLine,
            value_map: &[0, 0, 0, 1],
            involution: Mobius([1, 2, 1, -1]),
            relation: Sum(1),
            aux_involutions: &[],
            excluded: &[3],
            label: ModularLabel::Shimura { l: 3 },
            level_primes: &[3],
            phi_table: PHI_SHIMURA_P3,
        },
    ]
}

/// Looks a tower up by name.
pub fn tower(name: &str) -> Result<TowerSpec> {
    catalog()
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| Error::UnknownTower(name.to_string()))
}

impl TowerSpec {
    pub fn is_admissible(&self, p: u64) -> bool {
        !self.excluded.contains(&p)
    }

    pub fn check_field(&self, ctx: &FieldCtx) -> Result<()> {
        if self.is_admissible(ctx.characteristic()) {
            Ok(())
        } else {
            Err(Error::InadmissibleCharacteristic { tower: self.name.to_string(), p: ctx.characteristic() })
        }
    }

    /// Genus of the level-1 coordinate curve.
    pub fn base_genus(&self) -> u64 {
        match self.base {
            BaseKind::ProjectiveLine => 0,
            BaseKind::Elliptic => 1,
        }
    }

    /// The integer table of `Phi(x, y)` for projective-line towers.
    pub fn phi_table(&self) -> &'static [(u32, u32, i64)] {
        self.phi_table
    }

    /// The correspondence as a polynomial.
    ///
    /// Projective-line towers: `Phi(x, y)` in variables `(x, y)`.
    /// Elliptic tower: `Phi(x, X, Y)` where `x` is the x-coordinate of `P`
    /// and `(X, Y)` is the next point, taken modulo `Y^2 = X^3 + 1`.
    pub fn phi(&self) -> MPoly {
        match self.base {
            BaseKind::ProjectiveLine => MPoly::from_xy(self.phi_table),
            BaseKind::Elliptic => elliptic_phi(),
        }
    }
}

// On the curve, (Y + 3)^2 - (X + 2)(X - 2)^2 = 2(X + 1)^2 + 6Y, so the
// x-coordinate of (2,3) - (X,Y) is N/D with
// N = 2(X + 1)^2 + 6Y and D = (X - 2)^2.
fn elliptic_phi() -> MPoly {
    let x = MPoly::var(0);
    let big_x = MPoly::var(1);
    let big_y = MPoly::var(2);
    let xp1 = big_x.add(&MPoly::int(1));
    let n = xp1.mul(&xp1).scale_int(2).add(&big_y.scale_int(6));
    let xm2 = big_x.sub(&MPoly::int(2));
    let d = xm2.mul(&xm2);
    let a = x.pow(3).sub(&MPoly::int(8));
    let d3 = d.pow(3);
    a.mul(&n.pow(3).sub(&d3.scale_int(8))).sub(&d3.scale_int(72))
}
