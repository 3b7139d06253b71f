use thiserror::Error;

/// Errors produced by the dependence statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample too small: need at least {required} observations, got {actual}")]
    TooFewObservations { required: usize, actual: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite input value")]
    NonFiniteInput,

    #[error("response is constant; the statistic has a zero denominator")]
    DegenerateResponse,

    #[error("continuity was assumed but the response has tied values")]
    ContinuityContradiction,

    #[error("conditional dependence coefficient is undefined (zero denominator)")]
    UndefinedT,

    #[error("conditional xi is undefined: xi(X, Y) equals 1")]
    UndefinedConditional,

    #[error("coordinate magnitude {value} does not fit in {int_bits} integer bits")]
    Overflow { value: f64, int_bits: u32 },

    #[error("invalid parameters: {0}")]
    Params(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name of the error kind, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TooFewObservations { .. } => "TooFewObservations",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFiniteInput => "NonFiniteInput",
            Error::DegenerateResponse => "DegenerateResponse",
            Error::ContinuityContradiction => "ContinuityContradiction",
            Error::UndefinedT => "UndefinedT",
            Error::UndefinedConditional => "UndefinedConditional",
            Error::Overflow { .. } => "OverflowError",
            Error::Params(_) => "ParamsError",
        }
    }
}
