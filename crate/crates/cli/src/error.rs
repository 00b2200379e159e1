use cayminor::groups::GroupError;
use cayminor::io::IoError;
use cayminor::kpr::KprError;
use cayminor::minors::MinorError;
use cayminor::rays::RaysError;
use thiserror::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_RADIUS: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("{0}")]
    Radius(String),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::File { .. } => EXIT_USAGE,
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
            CliError::Radius(_) => EXIT_RADIUS,
            CliError::Write(_) | CliError::Csv(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<KprError> for CliError {
    fn from(e: KprError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MinorError> for CliError {
    fn from(e: MinorError) -> Self {
        match e {
            MinorError::Group(g) => g.into(),
            MinorError::HostTooLarge(_) => CliError::Capacity(e.to_string()),
            MinorError::Invalid(_) | MinorError::EmptyIntersection(_) => CliError::CheckFailed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RaysError> for CliError {
    fn from(e: RaysError) -> Self {
        match e {
            RaysError::Group(g) => g.into(),
            RaysError::InsufficientRadius { .. }
            | RaysError::SphereTooSmall { .. }
            | RaysError::TooFewPaths { .. }
            | RaysError::RegionDisconnected { .. } => CliError::Radius(e.to_string()),
            RaysError::Invariant(_) | RaysError::Detour(_) | RaysError::NoIntersection => {
                CliError::CheckFailed(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Group(g) => g.into(),
            IoError::HashMismatch { .. } => CliError::CheckFailed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
