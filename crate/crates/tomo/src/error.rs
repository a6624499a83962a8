use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid POVM subset: {0}")]
    InvalidSubset(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("click vector has no scale factor; estimate or supply r first")]
    MissingScale,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("ill-conditioned operator: {0}")]
    IllConditioned(String),

    #[error("could not reach purity {purity} after {retries} attempts")]
    Generation { purity: f64, retries: u32 },

    #[error("ensemble for {qubits} qubits needs ~{required_bytes} bytes (budget {budget_bytes})")]
    Capacity {
        qubits: u32,
        required_bytes: u128,
        budget_bytes: u128,
    },
}
