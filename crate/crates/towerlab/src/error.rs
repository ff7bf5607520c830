use thiserror::Error;

/// Everything that can go wrong in towerlab.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..=12")]
    DegreeOutOfRange(u32),
    #[error("field of order {p}^{k} exceeds 10^6 elements")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("polynomial degree {0} exceeds 64")]
    DegreeTooLarge(usize),

    #[error("precision {0} too small (need at least {1} grid units)")]
    PrecisionTooSmall(i64, i64),
    #[error("precision lost: result known below q^({0}/24) only, wanted {1}")]
    PrecisionLoss(i64, i64),
    #[error("series has no invertible leading term")]
    NotInvertible,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("multiplier {0} outside 1..=36")]
    BadMultiplier(u32),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("unknown tower `{0}`")]
    UnknownTower(String),
    #[error("tower {tower} is not defined in characteristic {p}")]
    InadmissibleCharacteristic { tower: String, p: u64 },
    #[error("fiber over {0} is degenerate")]
    DegenerateFiber(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("projection ({j}, {m}) out of range for a chain of {len} points")]
    ProjectionOutOfRange { j: usize, m: usize, len: usize },
    #[error("chain length must be at least 1")]
    EmptyChain,
    #[error("reduction of {tower} mod {p} is not supported: {reason}")]
    UnsupportedReduction { tower: String, p: u64, reason: String },

    #[error("inconsistent ramification profile: {0}")]
    InconsistentProfile(String),
    #[error("Riemann-Hurwitz gives a non-integral genus")]
    NonIntegralGenus,
    #[error("Riemann-Hurwitz gives a negative genus")]
    NegativeGenus,
    #[error("surrogate field GF({p}^{k}) does not split the critical data of {tower}")]
    SurrogateTooSmall { tower: String, p: u64, k: u32 },
    #[error("depth {0} exceeds 12")]
    DepthOverflow(u32),
    #[error("tracked point set keeps growing")]
    OrbitNotFinite,
    #[error("level {0} exceeds 14")]
    LevelOverflow(u32),
    #[error("surrogates disagree: {0}")]
    SurrogateDisagreement(String),
    #[error("genus of {tower} level {level} unavailable: {reason}")]
    GenusUnavailable { tower: String, level: u32, reason: String },

    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
