use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The drift matrix has an eigenvalue with nonnegative real part.
    #[error("system is unstable (spectral abscissa {abscissa:.6e})")]
    Unstable { abscissa: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("time integration diverged at t = {time:.6e}")]
    Diverged { time: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("all {points} sweep points are unstable")]
    AllPointsUnstable { points: usize },
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::InvalidArgument(_) | Error::Io(_) => 1,
            Error::Unstable { .. } | Error::NumericalFailure(_) | Error::Diverged { .. } => 2,
            Error::AllPointsUnstable { .. } => 3,
        }
    }
}
