use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes. Each maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded { what: String, size: f64, cap: f64 },

    #[error("decomposition failed after {attempts} attempts; best measured error {best_error}")]
    DecompositionFailed { attempts: usize, best_error: f64 },

    #[error("not measurable over the regularized factor: agreement {agreement}")]
    NotMeasurable { agreement: f64 },

    #[error("regularization did not finish: {0}")]
    RegularizationFailed(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn cap(what: impl Into<String>, size: f64, cap: f64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            size,
            cap,
        }
    }

    /// 1 = domain/precondition, 2 = resource cap, 3 = internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
