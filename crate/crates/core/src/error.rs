use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the ivtest library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in bin '{bin}': {reason}")]
    Domain { bin: String, reason: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid contingency table: {0}")]
    InvalidContingency(String),

    #[error("positivity violated: empty cells in bins [{}]", .bins.join(", "))]
    Positivity { bins: Vec<String> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target column must contain both labels 0 and 1 ({0})")]
    DegenerateTarget(String),

    #[error("fewer than 2 realizable bins")]
    TooFewBins,

    #[error("missing values present in '{0}' and missing policy is Error")]
    MissingValues(String),

    #[error("column '{0}' not found")]
    MissingColumn(String),

    #[error("input has no data rows")]
    EmptyInput,

    #[error("no usable feature columns")]
    NoUsableFeatures,

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Coarse error categories, stable across releases, for callers that map
/// errors onto their own exception hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Domain,
    Positivity,
    Binning,
    Input,
    Io,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Domain { .. } | Error::InvalidDistribution(_) | Error::InvalidContingency(_) => {
                ErrorCategory::Domain
            }
            Error::Positivity { .. } => ErrorCategory::Positivity,
            Error::TooFewBins | Error::MissingValues(_) => ErrorCategory::Binning,
            Error::InvalidArgument(_)
            | Error::DegenerateTarget(_)
            | Error::MissingColumn(_)
            | Error::EmptyInput
            | Error::NoUsableFeatures => ErrorCategory::Input,
            Error::Io { .. } | Error::Csv(_) => ErrorCategory::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
