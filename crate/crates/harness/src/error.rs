use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit status for configuration problems (bad flags, invalid parameters).
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for problems with input or output files.
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: row {row}, column `{column}`: {msg}")]
    Cell { path: PathBuf, row: usize, column: String, msg: String },
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] relpriv::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use relpriv::Error as E;
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            HarnessError::Core(E::InvalidSchema(_))
            | HarnessError::Core(E::UnknownAttribute(_))
            | HarnessError::Core(E::InvalidPredicate(_))
            | HarnessError::Core(E::QueryParse { .. })
            | HarnessError::Core(E::InvalidParameter(_))
            | HarnessError::Core(E::BudgetOrder { .. })
            | HarnessError::Core(E::BudgetTooAggressive { .. })
            | HarnessError::Core(E::DegenerateBudget(_))
            | HarnessError::Core(E::EstimatorUndefined)
            | HarnessError::Core(E::HypothesisViolated(_))
            | HarnessError::Core(E::OracleDomainTooLarge { .. })
            | HarnessError::Core(E::NoAdmissibleQuery)
            | HarnessError::Core(E::InvalidPrior(_))
            | HarnessError::Core(E::ZeroProbabilityEvent) => EXIT_CONFIG,
            _ => EXIT_DATA,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
