use alloc::string::String;

/// Errors raised by the numerical kernels and the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes of the inputs do not agree.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An input held NaN or infinite values.
    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    /// Cholesky factorization failed even after ridging.
    #[error("matrix is not positive definite: pivot {pivot} has value {value:e}")]
    Singular { pivot: usize, value: f64 },

    /// Hyperparameters or sizes violate a precondition.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A value that must satisfy a structural invariant does not.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! dim_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Dimension(alloc::format!($($arg)*))
    };
}

macro_rules! config_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Config(alloc::format!($($arg)*))
    };
}

pub(crate) use config_err;
pub(crate) use dim_err;
