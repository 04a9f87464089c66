use thiserror::Error;

/// Every failure the library can report. Check failures are verdicts, not
/// errors; these variants mean a check could not be carried out at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be non-negative, got {0}")]
    NegativeRadicand(String),
    #[error("coordinates require a second radical (sqrt({found}) alongside sqrt({expected}))")]
    MixedRadicals { expected: String, found: String },
    #[error("configuration has no members")]
    EmptyConfiguration,
    #[error("member {0} is the zero vector")]
    ZeroVector(usize),
    #[error("members {0} and {1} are collinear")]
    CollinearPair(usize, usize),
    #[error("direction is orthogonal to member {0}")]
    NonGenericDirection(usize),
    #[error("direction must be non-zero")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid configuration JSON: {0}")]
    InvalidJson(String),
    #[error("the form sum m_a a(x)a is degenerate on the span")]
    SingularGram,
    #[error("no generic sample point found after {0} attempts")]
    SamplingExhausted(usize),
    #[error("point is too close to the hyperplane of member {0}")]
    NonGenericPoint(usize),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("wrong parameters for {family}: expected {expected}")]
    WrongParameterCount { family: String, expected: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NegativeRadicand(_) => "NegativeRadicand",
            Error::MixedRadicals { .. } => "MixedRadicals",
            Error::EmptyConfiguration => "EmptyConfiguration",
            Error::ZeroVector(_) => "ZeroVector",
            Error::CollinearPair(..) => "CollinearPair",
            Error::NonGenericDirection(_) => "NonGenericDirection",
            Error::ZeroDirection => "ZeroDirection",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidJson(_) => "InvalidJson",
            Error::SingularGram => "SingularGram",
            Error::SamplingExhausted(_) => "SamplingExhausted",
            Error::NonGenericPoint(_) => "NonGenericPoint",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::WrongParameterCount { .. } => "WrongParameterCount",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
