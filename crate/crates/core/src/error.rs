use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of a formula (e.g. a non-positive frequency).
    #[error("domain error: {0}")]
    Domain(String),

    /// A vehicle or run description that cannot be simulated.
    #[error("configuration error: {0}")]
    Config(String),

    /// A non-finite value appeared while stepping.
    #[error("numerical error at step {step}: {message}")]
    Numerical { step: u64, message: String },

    /// A vehicle failed inside a swarm run.
    #[error("vehicle {vehicle} failed: {source}")]
    Vehicle {
        vehicle: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Step index of a numerical failure, looking through swarm wrappers.
    pub fn failed_step(&self) -> Option<u64> {
        match self {
            Error::Numerical { step, .. } => Some(*step),
            Error::Vehicle { source, .. } => source.failed_step(),
            _ => None,
        }
    }
}
