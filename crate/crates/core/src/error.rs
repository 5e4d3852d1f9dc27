use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("N must be a power of two >= 2, got {0}")]
    InvalidGridSize(usize),

    #[error("invalid right-hand side: {0}")]
    InvalidRhs(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("amplitude vector has squared norm {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} is used more than once by the same operation")]
    DuplicateQubit(usize),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("layout needs {required} qubits, budget is {budget}")]
    BudgetExceeded { required: usize, budget: usize },

    #[error("statevector for {qubits} qubits does not fit in memory")]
    OutOfMemory { qubits: usize },

    #[error("outcome {outcome} on qubit {qubit} has probability {probability:e}; the algorithm has to be restarted")]
    ZeroProbability {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
