use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inconsistent sizes, invalid parameters or malformed configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A parameter lies outside the domain where the requested quantity exists.
    #[error("domain error: {0}")]
    Domain(String),

    /// Singular or numerically unusable linear system.
    #[error("singular system: {reason} (pivot magnitude {pivot:.3e}, scale {scale:.3e})")]
    Singular {
        reason: String,
        pivot: f64,
        scale: f64,
    },

    /// A precondition of an operation was violated by its input data.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The spectral band used for a growth-rate estimate carries no energy.
    #[error("noise floor is zero; seed the initial condition with noise")]
    ZeroNoiseFloor,

    /// No unstable mode: high-wavenumber content vanished, or no localized
    /// real eigenvalue exists.
    #[error("no unstable mode found")]
    NoModeFound,

    #[error("no turning point: {0}")]
    NoTurningPoint(String),

    #[error("eigensolver did not converge: {0}")]
    NotConverged(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
