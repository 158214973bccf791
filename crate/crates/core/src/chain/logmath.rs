//! Natural-log helpers for quantities spanning `2^{±n}`.

pub(crate) struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub(crate) fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        table.push(0.0);
        for i in 1..=n {
            acc += (i as f64).ln();
            table.push(acc);
        }
        LnFactorials { table }
    }

    /// `ln C(n, k)`, `-∞` outside `0 ≤ k ≤ n`.
    pub(crate) fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

pub(crate) fn ln_add(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

pub(crate) fn ln_sum3(a: f64, b: f64, c: f64) -> f64 {
    let hi = a.max(b).max(c);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp() + (c - hi).exp()).ln()
}

pub(crate) fn ln_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + v.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

/// `ln(4^n − 1)` without overflow.
pub(crate) fn ln_four_pow_minus_one(n: usize) -> f64 {
    let ln4n = n as f64 * 4f64.ln();
    ln4n + (-(-ln4n).exp()).ln_1p()
}
