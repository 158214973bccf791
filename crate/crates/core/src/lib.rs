pub mod analysis;
pub mod chain;
pub mod circuit;
pub mod clifford;
pub mod error;
pub mod experiments;
pub mod pauli;

pub use circuit::{parallelize, parallelize_asap, sample_circuit, Circuit, Gate, LayeredCircuit};
pub use clifford::{CliffordTableau, Generator, TwoQubitCliffordTable};
pub use error::{Error, Result};
pub use pauli::{Letter, PauliString};
