use thiserror::Error;

/// Errors raised by ring loading, enumeration and the numerical suites.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown ring spec `{0}`")]
    UnknownRing(String),

    #[error("invalid ring parameter in `{spec}`: {reason}")]
    BadParameter { spec: String, reason: String },

    #[error("malformed ring file {path}: {reason}")]
    MalformedFile { path: String, reason: String },

    #[error("ring failed validation: {0}")]
    Validation(String),

    #[error("unknown irreducible `{0}`")]
    UnknownIrrep(String),

    #[error("cannot parse irreducible label `{0}`")]
    BadIrrepLabel(String),

    #[error("enumeration cap of {cap} irreducibles exceeded")]
    CapExceeded { cap: usize },

    #[error("sequence too short: need at least {needed} points, have {have}")]
    SequenceTooShort { needed: usize, have: usize },

    #[error("degenerate fit window: {0} points (need at least 8)")]
    DegenerateWindow(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("intertwiner solve for {triple} is rank deficient: {reason}")]
    Intertwiner { triple: String, reason: String },

    #[error("missing modular data for irreducible {0}")]
    MissingModularData(String),

    #[error("exponential series needs {needed} terms, cap is {cap}")]
    TruncationCap { needed: usize, cap: usize },

    #[error(
        "truncation budget exhausted at λ = {lambda}; largest feasible λ on the grid: {feasible:?}"
    )]
    LambdaTooLarge { lambda: f64, feasible: Option<f64> },

    #[error("quadrature did not reach tolerance {target:e} (achieved {achieved:e})")]
    Quadrature { target: f64, achieved: f64 },

    #[error("not a *-representation: residual {0:e}")]
    NotStarRepresentation(f64),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn bad_param(spec: &str, reason: impl Into<String>) -> Self {
        Error::BadParameter {
            spec: spec.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn malformed(path: &str, reason: impl Into<String>) -> Self {
        Error::MalformedFile {
            path: path.to_string(),
            reason: reason.into(),
        }
    }

    /// True for resource-budget failures (enumeration or truncation caps).
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::TruncationCap { .. } | Error::LambdaTooLarge { .. }
        )
    }
}
