use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable `{found}` does not use prefix `{expected}` (at byte {pos})")]
    MixedPrefix { pos: usize, expected: String, found: String },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCount(usize, usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("coefficient field mismatch")]
    FieldMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} is below the minimum {1} for this operation")]
    DegreeTooLow(u32, u32),
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix size {size} exceeds the symbolic determinant cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("internal inexact division in fraction-free elimination")]
    InexactDivision,
    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, &'static str),
    #[error("point must be nonzero")]
    ZeroPoint,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("restriction to the hyperplane is identically zero")]
    HyperplaneInHypersurface,
    #[error("every sample hit the base locus; resample with another seed")]
    AllSamplesDegenerate,
    #[error("invalid hyperplane chart: {0}")]
    InvalidChart(String),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("gave up after {attempts} attempts: {reason}")]
    RetriesExhausted { attempts: u32, reason: String },
    #[error("the polar relation is linear (the hypersurface is a cone); pass the cone flag to proceed")]
    ConeRelation,
    #[error("every derivative composition g_i vanishes identically; choose another relation")]
    DegenerateRelation,
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("no preimage found within the sampling budget")]
    NoPreimage,
}
