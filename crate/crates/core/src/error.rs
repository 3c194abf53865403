use thiserror::Error;

/// Errors raised across the crate.
///
/// The CLI maps these onto process exit codes through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} is out of range for a group of order {order}")]
    InvalidElement { index: u64, order: u64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the generating set does not generate the group")]
    NotGenerating,

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("sampling budget exhausted after {attempts} candidate draws")]
    SamplingBudget { attempts: usize },

    #[error("evaluation budget exhausted; best enclosure so far is [{lo}, {hi}]")]
    EnclosureBudget { lo: f64, hi: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 precondition, 3 resource, 4 sampling budget, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidElement { .. } | Error::Parse(_) | Error::Precondition(_) | Error::NotGenerating => 2,
            Error::Resource(_) | Error::EnclosureBudget { .. } => 3,
            Error::SamplingBudget { .. } => 4,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
