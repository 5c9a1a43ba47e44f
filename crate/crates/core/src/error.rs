use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure{}: {msg}", at_time(.t))]
    NumericalFailure { t: Option<f64>, msg: String },

    #[error("check failure: identity '{identity}' at t = {t}: residual {residual:e}")]
    CheckFailure {
        identity: String,
        t: f64,
        residual: f64,
    },
}

fn at_time(t: &Option<f64>) -> String {
    match t {
        Some(t) => format!(" at t = {t}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure {
            t: None,
            msg: msg.into(),
        }
    }

    /// Attach a time coordinate to a numerical failure that does not carry one yet.
    pub fn at(self, time: f64) -> Self {
        match self {
            Error::NumericalFailure { t: None, msg } => Error::NumericalFailure {
                t: Some(time),
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
