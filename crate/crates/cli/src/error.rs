use thiserror::Error;

use dilates::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid parameter: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn parse(line: Option<usize>, message: String) -> Self {
        CliError::Parse { line, message }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// 0 success, 2 parse, 3 invalid parameter, 4 hypothesis violation,
    /// 5 budget, 1 everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Usage(_) => 3,
            CliError::Json(_) => 1,
            CliError::Core(e) => match e {
                CoreError::InvalidModulus(_)
                | CoreError::InvalidParameter(_)
                | CoreError::ZeroDilation
                | CoreError::ZeroDimension
                | CoreError::EmptySearchSpace { .. }
                | CoreError::MixedRecords => 3,
                CoreError::RankDeficient { .. } | CoreError::NotReduced { .. } | CoreError::EmptySet => 4,
                CoreError::BudgetExceeded { .. } => 5,
                CoreError::DimensionMismatch { .. }
                | CoreError::Overflow
                | CoreError::SingularMatrix
                | CoreError::TheoremViolation { .. } => 1,
            },
        }
    }
}
