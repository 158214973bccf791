use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("invalid Pauli string {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("enumeration of {size} Paulis exceeds the budget of {budget}; use monte_carlo")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("statevector oracle limited to {limit} qubits, got {n}")]
    OracleLimit { n: usize, limit: usize },

    #[error("gate table checksum mismatch: file has {found}, table is {expected}")]
    Checksum { found: String, expected: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
