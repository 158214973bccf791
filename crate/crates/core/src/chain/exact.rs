//! Exact rational evolution of the weight chain.
//!
//! All rows share the denominator `D = 5n(n−1)`, so `t` steps are carried as
//! integer numerators over `D^t`.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use super::{check_row, row_numerators};
use crate::error::{arg, Result};

/// Largest `n` accepted by the exact evolution.
pub const EXACT_MAX_N: usize = 64;

/// `(down, stay, up)` as reduced fractions.
pub fn transition_row_exact(n: usize, l: usize) -> Result<[Ratio<i64>; 3]> {
    check_row(n, l)?;
    let (down, stay, up) = row_numerators(n as u64, l as u64);
    let denom = (5 * n * (n - 1)) as i64;
    Ok([
        Ratio::new(down as i64, denom),
        Ratio::new(stay as i64, denom),
        Ratio::new(up as i64, denom),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub n: usize,
    pub numerators: Vec<BigUint>,
    pub denominator: BigUint,
}

impl ExactDistribution {
    pub fn probability(&self, m: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerators[m].clone()),
            BigInt::from(self.denominator.clone()),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.numerators
            .iter()
            .map(|num| ratio_to_f64(num, &self.denominator))
            .collect()
    }

    pub fn total(&self) -> BigRational {
        let sum: BigUint = self.numerators.iter().sum();
        BigRational::new(BigInt::from(sum), BigInt::from(self.denominator.clone()))
    }
}

/// `num / den` rounded to the nearest double (up to one ulp).
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    q.to_f64().expect("finite") * 2f64.powi(-shift as i32)
}

fn integer_rows(n: usize) -> Vec<(u64, u64, u64)> {
    (0..=n)
        .map(|l| {
            if l == 0 {
                (0, 5 * n as u64 * (n as u64 - 1), 0)
            } else {
                row_numerators(n as u64, l as u64)
            }
        })
        .collect()
}

/// Row `ℓ0` of `P^t` in exact arithmetic.
pub fn evolve_exact(n: usize, l0: usize, t: usize) -> Result<ExactDistribution> {
    if n > EXACT_MAX_N {
        return arg(format!(
            "exact evolution supports n ≤ {EXACT_MAX_N}, got {n}"
        ));
    }
    check_row(n, l0)?;
    let rows = integer_rows(n);
    let mut cur = vec![BigUint::zero(); n + 1];
    cur[l0] = BigUint::one();
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); n + 1];
        for (l, v) in cur.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (down, stay, up) = rows[l];
            if l > 0 && down > 0 {
                next[l - 1] += v * down;
            }
            next[l] += v * stay;
            if l < n && up > 0 {
                next[l + 1] += v * up;
            }
        }
        cur = next;
    }
    let denominator = BigUint::from(5 * n as u64 * (n as u64 - 1)).pow(t as u32);
    Ok(ExactDistribution {
        n,
        numerators: cur,
        denominator,
    })
}

/// `Σ_p C(k,p) 3^p C(n−k, ℓ−p)` as an exact integer.
pub(crate) fn coefficient_sum_exact(n: usize, k: usize, l: usize) -> BigUint {
    let mut acc = BigUint::zero();
    for p in 0..=l.min(k) {
        if l - p > n - k {
            continue;
        }
        acc += binomial(k, p) * BigUint::from(3u32).pow(p as u32) * binomial(n - k, l - p);
    }
    acc
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The union bound `Σ_ℓ coef(ℓ) Σ_{m≤d} P^t(ℓ,m)` in exact arithmetic,
/// via backward evolution of the indicator of `{1..d}`.
pub fn union_bound_exact(n: usize, k: usize, d: usize, t: usize) -> Result<BigRational> {
    if n > EXACT_MAX_N {
        return arg(format!(
            "exact evaluation supports n ≤ {EXACT_MAX_N}, got {n}"
        ));
    }
    super::bounds::check_union_args(n, k, d)?;
    let rows = integer_rows(n);
    let mut f: Vec<BigUint> = (0..=n)
        .map(|m| {
            if (1..=d).contains(&m) {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        })
        .collect();
    for _ in 0..t {
        let next: Vec<BigUint> = (0..=n)
            .map(|l| {
                let (down, stay, up) = rows[l];
                let mut v = &f[l] * stay;
                if l > 0 {
                    v += &f[l - 1] * down;
                }
                if l < n {
                    v += &f[l + 1] * up;
                }
                v
            })
            .collect();
        f = next;
    }
    let mut num = BigUint::zero();
    for (l, fl) in f.iter().enumerate().skip(1) {
        num += coefficient_sum_exact(n, k, l) * fl;
    }
    let den = BigUint::from(5 * n as u64 * (n as u64 - 1)).pow(t as u32);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sum_to_one() {
        for n in 2..=40 {
            for l in 1..=n {
                let [a, b, c] = transition_row_exact(n, l).unwrap();
                assert_eq!(a + b + c, Ratio::from_integer(1));
            }
        }
    }

    #[test]
    fn exact_matches_float() {
        let e = evolve_exact(9, 2, 25).unwrap();
        assert_eq!(e.total(), BigRational::one());
        let f = super::super::evolve(9, 2, 25).unwrap();
        for (a, b) in e.to_f64().iter().zip(&f.probs) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(evolve_exact(65, 1, 1).is_err());
    }

    #[test]
    fn ratio_conversion() {
        let v = ratio_to_f64(&BigUint::from(1u32), &BigUint::from(3u32));
        assert_eq!(v, 1.0 / 3.0);
        let big = BigUint::from(10u32).pow(400);
        assert_eq!(ratio_to_f64(&big, &(&big * 4u32)), 0.25);
    }

    #[test]
    fn tiny_union_bound() {
        // ℓ=1: 4 · 0.4, ℓ=2: 3 · 0.4
        let v = union_bound_exact(2, 1, 1, 1).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(14), BigInt::from(5)));
    }
}
