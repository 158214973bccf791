//! Failure-probability bounds built on the weight chain.

use serde::{Deserialize, Serialize};

use super::logmath::{ln_four_pow_minus_one, ln_sum, ln_sum3, LnFactorials};
use super::WeightChain;
use crate::analysis::binary_entropy;
use crate::error::{arg, Result};

/// Parameters shared by the bound evaluations. `c` is the constant in
/// `t = ⌈c·n·log₂²n⌉`; it is found by search, not given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    pub delta: f64,
    pub eta: f64,
    pub c: Option<f64>,
}

impl BoundParams {
    pub fn union_bound(&self) -> Result<f64> {
        union_bound(self.n, self.k, self.d, self.t)
    }

    pub fn check_theorem2(&self) -> Result<Theorem2Report> {
        let t = match self.c {
            Some(c) => t_from_constant(self.n, c),
            None => self.t,
        };
        Theorem2Report::evaluate(self.n, self.delta, self.eta, t)
    }

    pub fn closed_form_failure_bound(&self) -> Result<ClosedFormBound> {
        closed_form_failure_bound(self.n, self.k, self.d, self.delta)
    }
}

/// `⌈c · n · log₂² n⌉`.
pub fn t_from_constant(n: usize, c: f64) -> usize {
    let lg = (n as f64).log2();
    (c * n as f64 * lg * lg).ceil() as usize
}

pub(crate) fn check_union_args(n: usize, k: usize, d: usize) -> Result<()> {
    if n < 2 || k == 0 || k >= n {
        return arg(format!("need 1 ≤ k < n, got n={n}, k={k}"));
    }
    if d == 0 || d > n {
        return arg(format!("need 1 ≤ d ≤ n, got d={d}"));
    }
    Ok(())
}

fn check_coefficient_args(n: usize, k: usize, l: usize) -> Result<()> {
    if k > n || l > n {
        return arg(format!("need k, ℓ ≤ n, got n={n}, k={k}, ℓ={l}"));
    }
    Ok(())
}

/// `ln Σ_p C(k,p) 3^p C(n−k, ℓ−p)`: the log of the number of candidate
/// Paulis `ν_A ν_B` of weight `ℓ`.
pub fn ln_coefficient_sum(n: usize, k: usize, l: usize) -> Result<f64> {
    check_coefficient_args(n, k, l)?;
    let lf = LnFactorials::new(n);
    Ok(ln_coefficient_sum_with(&lf, n, k, l))
}

fn ln_coefficient_sum_with(lf: &LnFactorials, n: usize, k: usize, l: usize) -> f64 {
    let ln3 = 3f64.ln();
    ln_sum(
        (0..=l.min(k))
            .filter(|&p| l - p <= n - k)
            .map(|p| lf.ln_binomial(k, p) + p as f64 * ln3 + lf.ln_binomial(n - k, l - p)),
    )
}

pub fn coefficient_sum(n: usize, k: usize, l: usize) -> Result<f64> {
    Ok(ln_coefficient_sum(n, k, l)?.exp())
}

/// `ln[(ℓ+1) · 3^{λℓ+1} · C(n,ℓ)]` with `λ = 3k/(n+2k)`.
pub fn ln_coefficient_bound(n: usize, k: usize, l: usize) -> Result<f64> {
    check_coefficient_args(n, k, l)?;
    let lf = LnFactorials::new(n);
    let lambda = 3.0 * k as f64 / (n as f64 + 2.0 * k as f64);
    Ok(((l + 1) as f64).ln() + (lambda * l as f64 + 1.0) * 3f64.ln() + lf.ln_binomial(n, l))
}

pub fn coefficient_bound(n: usize, k: usize, l: usize) -> Result<f64> {
    Ok(ln_coefficient_bound(n, k, l)?.exp())
}

impl WeightChain {
    /// `ln (P^t f)` for `f` given as logs.
    fn backward_ln(&self, mut lf: Vec<f64>, t: usize) -> Vec<f64> {
        let n = self.n;
        let ln = |v: f64| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY };
        let ln_down: Vec<f64> = self.down.iter().map(|&v| ln(v)).collect();
        let ln_stay: Vec<f64> = self.stay.iter().map(|&v| ln(v)).collect();
        let ln_up: Vec<f64> = self.up.iter().map(|&v| ln(v)).collect();
        let mut next = vec![f64::NEG_INFINITY; n + 1];
        for _ in 0..t {
            for l in 0..=n {
                let a = if l > 0 {
                    ln_down[l] + lf[l - 1]
                } else {
                    f64::NEG_INFINITY
                };
                let b = ln_stay[l] + lf[l];
                let c = if l < n {
                    ln_up[l] + lf[l + 1]
                } else {
                    f64::NEG_INFINITY
                };
                next[l] = ln_sum3(a, b, c);
            }
            std::mem::swap(&mut lf, &mut next);
        }
        lf
    }
}

/// Natural log of the union bound
/// `Σ_{ℓ=1}^{n} Σ_p C(k,p) 3^p C(n−k,ℓ−p) Σ_{m=1}^{d} P^t(ℓ,m)`.
pub fn ln_union_bound(n: usize, k: usize, d: usize, t: usize) -> Result<f64> {
    check_union_args(n, k, d)?;
    let chain = WeightChain::new(n)?;
    let indicator = (0..=n)
        .map(|m| {
            if (1..=d).contains(&m) {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let hit = chain.backward_ln(indicator, t);
    let lf = LnFactorials::new(n);
    Ok(ln_sum(
        (1..=n).map(|l| ln_coefficient_sum_with(&lf, n, k, l) + hit[l]),
    ))
}

/// Upper bound on `Pr[distance ≤ d]` for a `t`-gate random encoder. Values
/// above 1 are vacuous but returned as computed.
pub fn union_bound(n: usize, k: usize, d: usize, t: usize) -> Result<f64> {
    Ok(ln_union_bound(n, k, d, t)?.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub l: usize,
    pub m: usize,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub n: usize,
    pub t: usize,
    pub delta: f64,
    pub eta: f64,
    pub m_max: usize,
    pub violations: Vec<Violation>,
    /// Largest `ln LHS − ln RHS` over the checked grid.
    pub worst_ln_margin: f64,
}

impl Theorem2Report {
    /// Compares `P^t(ℓ,m)` against
    /// `4^{δn} C(n,m)3^m/(4^n−1) + 1/((3−η)^ℓ C(n,ℓ) n^{10})` for
    /// `1 ≤ ℓ ≤ n`, `1 ≤ m ≤ ⌊3n/4⌋`, entirely in log space.
    pub fn evaluate(n: usize, delta: f64, eta: f64, t: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.25) {
            return arg(format!("δ must lie in (0, 1/4), got {delta}"));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return arg(format!("η must lie in (0, 1), got {eta}"));
        }
        let chain = WeightChain::new(n)?;
        let lf = LnFactorials::new(n);
        let m_max = 3 * n / 4;
        let ln_norm = ln_four_pow_minus_one(n);
        let ln3 = 3f64.ln();
        let ln_n = (n as f64).ln();
        let mixed: Vec<f64> = (0..=m_max)
            .map(|m| delta * n as f64 * 4f64.ln() + lf.ln_binomial(n, m) + m as f64 * ln3 - ln_norm)
            .collect();

        let per_row = |l: usize| -> (Vec<Violation>, f64) {
            let row = chain.evolve_ln(l, t);
            let tail = -(l as f64 * (3.0 - eta).ln() + lf.ln_binomial(n, l) + 10.0 * ln_n);
            let mut out = Vec::new();
            let mut worst = f64::NEG_INFINITY;
            for m in 1..=m_max {
                let ln_rhs = super::logmath::ln_add(mixed[m], tail);
                let ln_lhs = row[m];
                worst = worst.max(ln_lhs - ln_rhs);
                if ln_lhs > ln_rhs {
                    out.push(Violation {
                        l,
                        m,
                        ln_lhs,
                        ln_rhs,
                    });
                }
            }
            (out, worst)
        };

        #[cfg(feature = "parallel")]
        let rows: Vec<(Vec<Violation>, f64)> = {
            use rayon::prelude::*;
            (1..=n).into_par_iter().map(per_row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<(Vec<Violation>, f64)> = (1..=n).map(per_row).collect();

        let worst_ln_margin = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let violations = rows.into_iter().flat_map(|r| r.0).collect();
        Ok(Theorem2Report {
            n,
            t,
            delta,
            eta,
            m_max,
            violations,
            worst_ln_margin,
        })
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Smallest integer `c ∈ 1..=c_max` for which the chain bound holds with
/// `t = ⌈c n log₂² n⌉`.
pub fn smallest_theorem2_constant(
    n: usize,
    delta: f64,
    eta: f64,
    c_max: u32,
) -> Result<Option<u32>> {
    for c in 1..=c_max {
        let report = Theorem2Report::evaluate(n, delta, eta, t_from_constant(n, c as f64))?;
        if report.holds() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormBound {
    /// `1/n^8`.
    pub first_term: f64,
    /// `k − n(1 − h(d/n) − (d/n)·log₂3 − 3δ)`.
    pub log2_second_term: f64,
    /// Sum of both terms (may be `inf` when vacuous).
    pub value: f64,
}

/// `1/n^8 + 2^{k − n(1 − h(d/n) − log₂3·d/n − 3δ)}`.
pub fn closed_form_failure_bound(
    n: usize,
    k: usize,
    d: usize,
    delta: f64,
) -> Result<ClosedFormBound> {
    if n == 0 || k > n || d > n {
        return arg(format!("need k, d ≤ n and n ≥ 1, got n={n}, k={k}, d={d}"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return arg(format!("δ must be a non-negative number, got {delta}"));
    }
    let nf = n as f64;
    let rel = d as f64 / nf;
    let log2_second_term =
        k as f64 - nf * (1.0 - binary_entropy(rel) - 3f64.log2() * rel - 3.0 * delta);
    let first_term = nf.powi(-8);
    Ok(ClosedFormBound {
        first_term,
        log2_second_term,
        value: first_term + log2_second_term.exp2(),
    })
}
