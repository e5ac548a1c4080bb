use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("graph is not connected")]
    NotConnected,

    #[error("leading eigenvalue is not simple (gap {gap:e})")]
    DegenerateLeadingEigenvalue { gap: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("spectrum has zero width (max - min = {width:e})")]
    DegenerateSpectrum { width: f64 },

    #[error("eigengap requires at least two eigenvalues")]
    SingleEigenvalue,

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("centrality eigenvalue of the covariance is tied with another (gap {gap:e})")]
    AmbiguousIndex { gap: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("eigengap is zero")]
    ZeroEigengap,

    #[error("centrality vector has a zero entry")]
    ZeroEntry,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by the numbers themselves (degenerate spectra,
    /// disconnected draws, ...) rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConnected
                | Error::DegenerateLeadingEigenvalue { .. }
                | Error::NonFinite
                | Error::NoConvergence
                | Error::DegenerateSpectrum { .. }
                | Error::SingleEigenvalue
                | Error::AmbiguousIndex { .. }
                | Error::ZeroVector
                | Error::ZeroEigengap
                | Error::ZeroEntry
        )
    }

    /// Short stable label used to tag failed rows in result files.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "invalid-graph",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::NotConnected => "not-connected",
            Error::DegenerateLeadingEigenvalue { .. } => "degenerate-leading-eigenvalue",
            Error::NonFinite => "non-finite",
            Error::NoConvergence => "no-convergence",
            Error::DegenerateSpectrum { .. } => "degenerate-spectrum",
            Error::SingleEigenvalue => "single-eigenvalue",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::AmbiguousIndex { .. } => "ambiguous-index",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::ZeroVector => "zero-vector",
            Error::ZeroEigengap => "zero-eigengap",
            Error::ZeroEntry => "zero-entry",
            Error::Parse(_) => "parse",
        }
    }
}
