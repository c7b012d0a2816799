use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero series has no valuation")]
    NoValuation,

    #[error("germ is identically zero")]
    ZeroGerm,

    #[error("germ has a nonzero constant term (it is a unit)")]
    UnitGerm,

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("too few coefficients: need {needed}, have {found}")]
    TooFewCoefficients { needed: usize, found: usize },

    #[error("singular ray at direction {theta}: Borel singularity near {pole_re:.6e}{pole_im:+.6e}i")]
    SingularRay {
        theta: f64,
        pole_re: f64,
        pole_im: f64,
    },

    #[error("direction {theta} is incompatible with evaluation point arg {arg_t} for order k = {k}")]
    IncompatibleDirection { theta: f64, arg_t: f64, k: f64 },

    #[error("point outside P-sector: arg P(x0) = {arg_p}, direction {theta}, k = {k}")]
    PointOutsideSector { arg_p: f64, theta: f64, k: f64 },

    #[error("continuation error {continuation_error:e} exceeds tolerance {tolerance:e}")]
    ContinuationInaccurate {
        continuation_error: f64,
        tolerance: f64,
    },

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for malformed input (as opposed to a well-formed request that
    /// fails for mathematical reasons).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::UnknownExample(_))
    }
}
