//! The birth–death chain followed by the weight of a Pauli under one random
//! two-qubit Clifford gate on a uniformly random pair.
//!
//! From weight `ℓ` on `n` qubits (denominator `D = 5n(n−1)`):
//!
//! ```text
//! down  ℓ → ℓ−1 : 2ℓ(ℓ−1)        / D
//! up    ℓ → ℓ+1 : 6ℓ(n−ℓ)        / D
//! stay          : 1 − 2ℓ(3n−2ℓ−1) / D
//! ```
//!
//! Weight 0 is never reached from `ℓ ≥ 1`. The stationary law is the weight
//! distribution of a uniformly random non-identity Pauli,
//! `C(n,m) 3^m / (4^n − 1)`.

mod bounds;
mod exact;
pub(crate) mod logmath;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

pub use bounds::{
    closed_form_failure_bound, coefficient_bound, coefficient_sum, ln_coefficient_bound,
    ln_coefficient_sum, ln_union_bound, smallest_theorem2_constant, t_from_constant, union_bound,
    BoundParams, ClosedFormBound, Theorem2Report, Violation,
};
pub use exact::{evolve_exact, transition_row_exact, union_bound_exact, ExactDistribution};

/// Tolerated negative roundoff in a probability entry.
pub const NEGATIVE_TOLERANCE: f64 = 1e-14;
/// Tolerated deviation of total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    pub down: f64,
    pub stay: f64,
    pub up: f64,
}

/// Integer numerators `(down, stay, up)` over `5n(n−1)`.
pub(crate) fn row_numerators(n: u64, l: u64) -> (u64, u64, u64) {
    let denom = 5 * n * (n - 1);
    let down = 2 * l * (l - 1);
    let up = 6 * l * (n - l);
    let stay = denom - 2 * l * (3 * n - 2 * l - 1);
    (down, stay, up)
}

fn check_row(n: usize, l: usize) -> Result<()> {
    if n < 2 {
        return arg(format!("the weight chain needs n ≥ 2, got {n}"));
    }
    if l == 0 || l > n {
        return arg(format!("weight {l} outside 1..={n}"));
    }
    Ok(())
}

pub fn transition_row(n: usize, l: usize) -> Result<TransitionRow> {
    check_row(n, l)?;
    let (down, stay, up) = row_numerators(n as u64, l as u64);
    let denom = (5 * n * (n - 1)) as f64;
    Ok(TransitionRow {
        down: down as f64 / denom,
        stay: stay as f64 / denom,
        up: up as f64 / denom,
    })
}

/// Tridiagonal transition matrix on `{0, …, n}`.
#[derive(Debug, Clone)]
pub struct WeightChain {
    n: usize,
    down: Vec<f64>,
    stay: Vec<f64>,
    up: Vec<f64>,
}

impl WeightChain {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return arg(format!("the weight chain needs n ≥ 2, got {n}"));
        }
        let mut down = vec![0.0; n + 1];
        let mut stay = vec![0.0; n + 1];
        let mut up = vec![0.0; n + 1];
        stay[0] = 1.0;
        for l in 1..=n {
            let r = transition_row(n, l)?;
            down[l] = r.down;
            stay[l] = r.stay;
            up[l] = r.up;
        }
        Ok(WeightChain { n, down, stay, up })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn row(&self, l: usize) -> TransitionRow {
        TransitionRow {
            down: self.down[l],
            stay: self.stay[l],
            up: self.up[l],
        }
    }

    /// `out = p · P` (distribution update).
    pub fn step_forward(&self, p: &[f64], out: &mut [f64]) {
        let n = self.n;
        for m in 0..=n {
            let mut v = p[m] * self.stay[m];
            if m > 0 {
                v += p[m - 1] * self.up[m - 1];
            }
            if m < n {
                v += p[m + 1] * self.down[m + 1];
            }
            out[m] = v;
        }
    }

    /// `out = P · f` (expectation update for a function of the weight).
    pub fn step_backward(&self, f: &[f64], out: &mut [f64]) {
        let n = self.n;
        for l in 0..=n {
            let mut v = self.stay[l] * f[l];
            if l > 0 {
                v += self.down[l] * f[l - 1];
            }
            if l < n {
                v += self.up[l] * f[l + 1];
            }
            out[l] = v;
        }
    }

    pub fn evolve(&self, start: &WeightDistribution, t: usize) -> WeightDistribution {
        let mut cur = start.probs.clone();
        let mut next = vec![0.0; self.n + 1];
        for _ in 0..t {
            self.step_forward(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        WeightDistribution::from_raw(self.n, cur)
    }

    /// Row `ℓ0` of `P^t` as natural logarithms, robust to underflow.
    pub fn evolve_ln(&self, l0: usize, t: usize) -> Vec<f64> {
        let n = self.n;
        let ln = |v: f64| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY };
        let ln_down: Vec<f64> = self.down.iter().map(|&v| ln(v)).collect();
        let ln_stay: Vec<f64> = self.stay.iter().map(|&v| ln(v)).collect();
        let ln_up: Vec<f64> = self.up.iter().map(|&v| ln(v)).collect();
        let mut cur = vec![f64::NEG_INFINITY; n + 1];
        cur[l0] = 0.0;
        let mut next = vec![f64::NEG_INFINITY; n + 1];
        // Support grows by one per step; only touch the reachable band.
        let (mut lo, mut hi) = (l0, l0);
        for _ in 0..t {
            let new_lo = lo.saturating_sub(1).max(1);
            let new_hi = (hi + 1).min(n);
            for m in new_lo..=new_hi {
                let a = if m > 0 {
                    cur[m - 1] + ln_up[m - 1]
                } else {
                    f64::NEG_INFINITY
                };
                let b = cur[m] + ln_stay[m];
                let c = if m < n {
                    cur[m + 1] + ln_down[m + 1]
                } else {
                    f64::NEG_INFINITY
                };
                next[m] = logmath::ln_sum3(a, b, c);
            }
            std::mem::swap(&mut cur, &mut next);
            lo = new_lo;
            hi = new_hi;
        }
        cur
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub n: usize,
    /// Indexed by weight `0..=n`.
    pub probs: Vec<f64>,
}

impl WeightDistribution {
    /// Validates length, non-negativity (up to roundoff, which is clamped)
    /// and total mass.
    pub fn new(n: usize, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n + 1 {
            return arg(format!("expected {} entries, got {}", n + 1, probs.len()));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_TOLERANCE {
                return arg(format!("invalid probability {p}"));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return arg(format!("total mass {total} differs from 1"));
        }
        Ok(WeightDistribution { n, probs })
    }

    pub(crate) fn from_raw(n: usize, probs: Vec<f64>) -> Self {
        WeightDistribution { n, probs }
    }

    pub fn point_mass(n: usize, l: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[l] = 1.0;
        WeightDistribution { n, probs }
    }

    /// Empirical distribution of observed weights.
    pub fn from_counts(n: usize, counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let mut probs = vec![0.0; n + 1];
        for (m, &c) in counts.iter().enumerate().take(n + 1) {
            probs[m] = c as f64 / total.max(1) as f64;
        }
        WeightDistribution { n, probs }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn total_variation(&self, other: &WeightDistribution) -> f64 {
        assert_eq!(self.n, other.n);
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum()
    }
}

/// Row `ℓ0` of `P^t`, by `t` tridiagonal products.
pub fn evolve(n: usize, l0: usize, t: usize) -> Result<WeightDistribution> {
    if l0 == 0 || l0 > n {
        return arg(format!("start weight {l0} outside 1..={n}"));
    }
    if t == 0 {
        return Ok(WeightDistribution::point_mass(n, l0));
    }
    let chain = WeightChain::new(n)?;
    Ok(chain.evolve(&WeightDistribution::point_mass(n, l0), t))
}

/// `C(n,m) 3^m / (4^n − 1)` for `m ≥ 1`, zero at `m = 0`.
pub fn stationary(n: usize) -> Result<WeightDistribution> {
    if n == 0 {
        return arg("stationary law needs n ≥ 1");
    }
    // Σ_{m≥1} C(n,m) 3^m = 4^n − 1, so normalizing by the computed sum
    // gives the same law with the mass exact to rounding.
    let lf = logmath::LnFactorials::new(n);
    let ln_terms: Vec<f64> = (1..=n)
        .map(|m| lf.ln_binomial(n, m) + m as f64 * 3f64.ln())
        .collect();
    let ln_norm = logmath::ln_sum(ln_terms.iter().copied());
    let mut probs = vec![0.0; n + 1];
    for (p, lt) in probs.iter_mut().skip(1).zip(&ln_terms) {
        *p = (lt - ln_norm).exp();
    }
    Ok(WeightDistribution { n, probs })
}
