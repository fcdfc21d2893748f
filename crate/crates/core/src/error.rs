use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("{what}: {n} qubits exceeds the limit of {limit}")]
    TooManyQubits {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("zero operator")]
    ZeroOperator,

    #[error("could not parse Pauli string {text:?}: {reason}")]
    PauliParse { text: String, reason: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit contains non-Clifford gate {0}; T-count witness undefined")]
    NonCliffordT(String),

    #[error("stabilizer count {count} is not a power of two (tolerance {tolerance})")]
    StabilizerCountNotPowerOfTwo { count: usize, tolerance: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("formula has a pole at these parameters: {0}")]
    Pole(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
