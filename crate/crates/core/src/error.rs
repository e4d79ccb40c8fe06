use thiserror::Error;

/// Errors raised anywhere in the emulator, the oracles, or the runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("{requested} qubits exceeds the configured cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("register [{start}, {end}) out of range for a {num_qubits}-qubit state")]
    RegisterOutOfRange {
        start: usize,
        end: usize,
        num_qubits: usize,
    },

    #[error("gate is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitaryGate { deviation: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("phase at basis index {index} is not finite ({value})")]
    NonFinitePhase { index: usize, value: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    UnnormalizedState { norm_sqr: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian (max |H - H†| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("invalid evolution plan: {0}")]
    InvalidPlan(String),

    #[error("wavepacket width {width} is below twice the grid spacing {dx}")]
    UnresolvableWidth { width: f64, dx: f64 },

    #[error("unknown analytic case `{0}`")]
    UnknownAnalyticCase(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
