use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree {0} is outside 1..=11")]
    DegreeOutOfRange(u32),
    #[error("element {bits} does not belong to GF({q})")]
    NotInField { bits: u32, q: u32 },
    #[error("elements come from different fields (GF({left}) and GF({right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("field table validation failed: {0}")]
    TableValidation(String),
    #[error("curve degree {0} is outside 1..=6")]
    CurveDegree(u32),
    #[error("monomial mask {mask:#x} is not valid for degree {degree}")]
    CurveMask { degree: u32, mask: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("work limit exceeded: {needed} codewords > limit {limit}")]
    WorkLimit { needed: u128, limit: u128 },
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("distance bound is not positive ({0}); the evaluation map is not injective")]
    NonPositiveDistance(i128),
    #[error("invariant e = {e} violates e >= -g (g = {g}); the bundle must be normalized")]
    NotNormalized { e: i64, g: i64 },
    #[error("l = {l} is not smaller than the number of rational points {aleph}")]
    TooManyFibers { l: i64, aleph: i64 },
    #[error("singular Weierstrass curve")]
    SingularCurve,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
