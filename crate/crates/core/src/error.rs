use thiserror::Error;

/// Errors raised by state construction, map application, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: map acts on {map_dim} sites, state has {state_dim}")]
    DimensionMismatch { map_dim: usize, state_dim: usize },

    #[error("dimension {dim} exceeds the dense-matrix guard of {limit}")]
    DenseSizeExceeded { dim: usize, limit: usize },

    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NotNormalized { norm: f64 },

    #[error("Ehrenfest time undefined for non-positive Lyapunov exponent {0}")]
    NonChaotic(f64),

    #[error("fidelity amplitude modulus {0} exceeds 1; channel would be unphysical")]
    UnphysicalAmplitude(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
