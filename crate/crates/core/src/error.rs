use thiserror::Error;

/// Errors raised by the engine. Every variant names the violated condition so
/// the CLI can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive semidefinite: eigenvalue {0:e} below tolerance")]
    NotPsd(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("normalization: vector norm {norm} deviates from 1 by more than {tol:e}")]
    Normalization { norm: f64, tol: f64 },
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("unitarity: matrix deviates from unitary by {0:e}")]
    Unitarity(f64),
    #[error("qubit index: {0}")]
    Index(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("contraction: step {step} has spectral norm {norm} > 1")]
    Contraction { step: usize, norm: f64 },
    #[error("missing witness: physical mode requires the circuit that prepared the current state")]
    MissingWitness,
    #[error("block encoding: {0}")]
    Encoding(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Stable short name of the violated condition.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotPsd(_) => "not_psd",
            Error::Shape(_) => "shape",
            Error::Normalization { .. } => "normalization",
            Error::Capacity(_) => "capacity",
            Error::Unitarity(_) => "unitarity",
            Error::Index(_) => "qubit_index",
            Error::Precondition(_) => "precondition",
            Error::Contraction { .. } => "contraction",
            Error::MissingWitness => "missing_witness",
            Error::Encoding(_) => "block_encoding",
            Error::Verification(_) => "verification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
