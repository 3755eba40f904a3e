use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("cannot combine values from Q(sqrt({0})) and Q(sqrt({1}))")]
    IncompatibleSurd(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot add terms carrying pi^({0}/2) and pi^({1}/2)")]
    PiPowerMismatch(i32, i32),
    #[error("square root of a non-positive rational {0}")]
    NonPositiveSqrt(String),
    #[error("surd {0} is not square-free")]
    NotSquareFree(u64),
    #[error("square-free part {0} does not fit in 64 bits")]
    SurdTooLarge(String),
    #[error("value {0} is not real")]
    NotReal(String),
    #[error("no exact square root available for {0}")]
    UnsupportedSqrt(String),
    #[error("cannot parse exact value from {0:?}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("monomial of degree {found} in a polynomial of degree {expected}")]
    InhomogeneousTerm { expected: u32, found: u32 },
    #[error("linear substitution map is singular")]
    SingularMap,
    #[error("L_ij requires distinct axes, got i = j = {0}")]
    RepeatedAxis(usize),
    #[error("axis index {0} out of range (expected 0..3)")]
    AxisOutOfRange(usize),
    #[error("non-integer {operator} eigenvalue {value} in block K={k}, Q={q}")]
    NonIntegerEigenvalue { operator: &'static str, value: String, k: u32, q: i32 },
    #[error("multiplicity block K={k}, Q={q}, L={l}: {reason}")]
    Multiplicity { k: u32, q: i32, l: u32, reason: String },
    #[error("cannot normalise the zero polynomial")]
    ZeroVector,
    #[error("k_max = {requested} exceeds the configured limit {limit}")]
    KmaxTooLarge { requested: u32, limit: u32 },
    #[error("built harmonic {label} disagrees with reference data: {reason}")]
    GoldenMismatch { label: String, reason: String },
    #[error("reference entry {label} failed validation: {check}")]
    GoldenValidation { label: String, check: String },
    #[error("missing partner state for {0}")]
    MissingPartner(String),
    #[error("label {0} not present in the catalog")]
    MissingLabel(String),
    #[error("unknown operator harmonic ({0},|{1}|); allowed: (0,|0|), (4,|0|), (6,|6|), (8,|0|)")]
    UnknownOperator(u32, u32),
    #[error("invalid data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
