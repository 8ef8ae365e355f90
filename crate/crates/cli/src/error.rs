use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PERFECT_POWER: i32 = 2;
pub const EXIT_PRECISION_CEILING: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(clap::Error),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Core(#[from] bvpcf_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use bvpcf_core::Error as E;
        match self {
            CliError::Usage(e) if is_informational(e) => EXIT_OK,
            CliError::Usage(_) | CliError::InvalidConfig(_) => EXIT_USAGE,
            CliError::Core(E::PerfectPower { .. }) => EXIT_PERFECT_POWER,
            CliError::Core(E::PrecisionCeiling { .. }) => EXIT_PRECISION_CEILING,
            CliError::Core(E::InvalidDegree(_) | E::InvalidArgument(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) => EXIT_INTERNAL,
        }
    }
}

/// `--help` and `--version` surface as clap errors but are not failures.
pub fn is_informational(e: &clap::Error) -> bool {
    matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion)
}
