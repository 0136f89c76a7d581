use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("length {0} is not a power of two")]
    BadLength(usize),

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("entry ({row}, {col}) has modulus {modulus} > 1")]
    ModulusViolation { row: usize, col: usize, modulus: f64 },

    #[error("row {0} is zero")]
    ZeroRow(usize),

    #[error("complex entries are not supported here (first at ({0}, {1}))")]
    ComplexUnsupported(usize, usize),

    #[error("block size {0} is not supported (expected 1 or 2, with block <= n)")]
    BadBlockSize(usize),

    #[error("vector norm {0} is not 1")]
    NotUnit(f64),

    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("width {0} exceeds the dense realization limit of {1} qubits")]
    TooWide(usize, usize),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("row {row} is not banded: {reason}")]
    NotBanded { row: usize, reason: String },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
