//! Code distance, the statevector reference oracle and the rate bound.

mod distance;
mod gv;
pub mod oracle;

pub use distance::{
    distance_exact, distance_exact_with_budget, distance_monte_carlo, CodeParams, DistanceMethod,
    DistanceReport, DEFAULT_EXACT_BUDGET,
};
pub use gv::{binary_entropy, gv_rate_bound};
pub use oracle::{kl_oracle, kl_oracle_distance, OracleReport, StateVector};
