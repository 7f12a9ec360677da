use sqsp_core::Error;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    /// Budget below the floor, or an override the ledger cannot fit.
    #[error("{message}")]
    Budget { message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("internal error: {0}")]
    Internal(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Budget { .. } => 3,
            CliError::Io(_) | CliError::Usage(_) => 4,
            CliError::Verify(_) => 5,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotNormalized { .. }
            | Error::DuplicateBasis(_)
            | Error::BadWidth { .. }
            | Error::BadBasisChar(_)
            | Error::ZeroAmplitude(_)
            | Error::Parse { .. } => CliError::Spec(e.to_string()),
            Error::BudgetTooSmall { m, m_min } => CliError::Budget {
                message: format!("ancilla budget m = {m} is too small; m_min = {m_min}"),
            },
            Error::InvalidOverride(_) => CliError::Budget { message: e.to_string() },
            other => CliError::Internal(other),
        }
    }
}
