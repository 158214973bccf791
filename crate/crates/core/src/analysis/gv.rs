//! Gilbert–Varshamov-type rate bound for random stabilizer codes.

use crate::error::{arg, Result};

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Achievable rate `1 − h(δ) − δ log₂ 3` at relative distance `δ = d/n`.
pub fn gv_rate_bound(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return arg(format!("relative distance {delta} outside [0, 1]"));
    }
    Ok(1.0 - binary_entropy(delta) - delta * 3f64.log2())
}
