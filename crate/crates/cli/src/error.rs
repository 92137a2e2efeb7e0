use cflow::FlowError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Flow(#[from] FlowError),

    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    /// 1 verification failed, 2 bad input, 3 singular or zero eigenvalue,
    /// 4 no convergence or overflow, 5 relation does not hold.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Flow(e) => match e {
                FlowError::SingularMatrix { .. }
                | FlowError::VandermondeSingular { .. }
                | FlowError::ZeroEigenvalue { .. } => 3,
                FlowError::NonConvergence { .. }
                | FlowError::AmbiguousDegree { .. }
                | FlowError::NonFinite(_) => 4,
                FlowError::RelationInvalid { .. } => 5,
                FlowError::DimensionMismatch { .. }
                | FlowError::NotJordanForm(_)
                | FlowError::InvalidTolerance(_)
                | FlowError::InvalidInput(_) => 2,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io {
            path: "<output>".into(),
            source,
        }
    }
}
