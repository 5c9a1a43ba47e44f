use std::fmt;

/// CLI failures, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Oracle(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Oracle(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
            CliError::Oracle(m) => write!(f, "oracle {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<tep_core::Error> for CliError {
    fn from(e: tep_core::Error) -> Self {
        match e {
            tep_core::Error::InvalidArgument(_) => CliError::Config(e.to_string()),
            tep_core::Error::NumericalFailure { .. } => CliError::Numerical(e.to_string()),
            tep_core::Error::CheckFailure { .. } => CliError::Oracle(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
