use std::fmt::Display;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures grouped by who has to fix them; each class has its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad arguments or configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Unreadable or malformed input data.
    #[error("data error: {0}")]
    Data(String),

    /// The numerics broke down on a well-formed request.
    #[error("numerical failure: {0}")]
    Numerical(cumlomb_core::Error),
}

impl Error {
    pub fn config(msg: impl Display) -> Self {
        Error::Config(msg.to_string())
    }

    pub fn data(msg: impl Display) -> Self {
        Error::Data(msg.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Data(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

/// Core errors are numerical failures or, otherwise, rejected requests.
impl From<cumlomb_core::Error> for Error {
    fn from(e: cumlomb_core::Error) -> Self {
        if e.is_numerical() {
            Error::Numerical(e)
        } else {
            Error::Config(e.to_string())
        }
    }
}

pub(crate) trait ResultExt<T> {
    /// Reclassifies a non-numerical failure as a data error.
    fn or_data(self, context: &str) -> Result<T>;
}

impl<T> ResultExt<T> for std::result::Result<T, cumlomb_core::Error> {
    fn or_data(self, context: &str) -> Result<T> {
        self.map_err(|e| {
            if e.is_numerical() {
                Error::Numerical(e)
            } else {
                Error::Data(format!("{context}: {e}"))
            }
        })
    }
}
