use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {0}")]
    NotSquare(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("operator is not Hermitian (max |M - M^dagger| = {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})"
    )]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("degenerate spectrum: eigenvalues {first} and {second} coincide")]
    DegenerateSpectrum { first: f64, second: f64 },

    #[error("operation needs a bipartition (d_A, d_B) on the state")]
    MissingBipartition,

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("outcome {0} has zero probability")]
    ZeroProbability(usize),

    #[error("relative entropy is infinite: support of rho leaks {leak:.3e} outside the support of sigma")]
    SupportMismatch { leak: f64 },

    #[error("degenerate configuration: {0}")]
    DegenerateConfig(&'static str),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
