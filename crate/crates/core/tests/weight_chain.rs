mod common;

use common::{binomial, union_bound_oracle};
use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use stabcodes::chain::{
    closed_form_failure_bound, coefficient_bound, coefficient_sum, evolve, evolve_exact,
    stationary, transition_row, transition_row_exact, union_bound, union_bound_exact, WeightChain,
    WeightDistribution,
};
use stabcodes::{Letter, PauliString, TwoQubitCliffordTable};

/// Weight law after one uniformly random gate on a uniformly random ordered
/// pair, by enumerating every (pair, table entry).
fn brute_force_row(n: usize, l: usize) -> Vec<f64> {
    let table = TwoQubitCliffordTable::shared();
    let mut start = PauliString::identity(n);
    for q in 0..l {
        start.set_letter(q, [Letter::X, Letter::Y, Letter::Z][q % 3]);
    }
    let mut counts = vec![0u64; n + 1];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for idx in 0..table.len() {
                let mut p = start.clone();
                table.conjugate_local(idx, i, j, &mut p);
                counts[p.weight()] += 1;
            }
        }
    }
    let total = (n * (n - 1) * table.len()) as f64;
    counts.iter().map(|&c| c as f64 / total).collect()
}

#[test]
fn rows_match_gate_enumeration() {
    for n in 2..=5 {
        for l in 1..=n {
            let got = brute_force_row(n, l);
            let row = transition_row(n, l).unwrap();
            assert!((got[l] - row.stay).abs() < 1e-12, "n={n} l={l}");
            assert!((got[l - 1] - row.down).abs() < 1e-12);
            if l < n {
                assert!((got[l + 1] - row.up).abs() < 1e-12);
            }
            let rest: f64 = got
                .iter()
                .enumerate()
                .filter(|(m, _)| m.abs_diff(l) > 1)
                .map(|(_, p)| p)
                .sum();
            assert_eq!(rest, 0.0);
        }
    }
}

#[test]
fn spec_rows() {
    let r = transition_row(4, 1).unwrap();
    assert_eq!((r.down, r.stay, r.up), (0.0, 0.7, 0.3));
    let r = transition_row_exact(6, 2).unwrap();
    assert_eq!(
        r,
        [Ratio::new(4, 150), Ratio::new(98, 150), Ratio::new(48, 150)]
    );
}

#[test]
fn exact_rows_sum_to_one_up_to_1024() {
    for n in 2..=1024 {
        for l in 1..=n {
            let [d, s, u] = transition_row_exact(n, l).unwrap();
            assert_eq!(d + s + u, Ratio::one(), "n={n} l={l}");
            assert!(d >= Ratio::zero() && s >= Ratio::zero() && u >= Ratio::zero());
        }
        // weight 0 is never entered from weight 1
        assert_eq!(transition_row_exact(n, 1).unwrap()[0], Ratio::zero());
    }
}

#[test]
fn mass_conserved_over_a_million_steps() {
    let n = 256;
    let chain = WeightChain::new(n).unwrap();
    let mut p = WeightDistribution::point_mass(n, 1).probs;
    let mut next = vec![0.0; n + 1];
    for _ in 0..1_000_000 {
        chain.step_forward(&p, &mut next);
        std::mem::swap(&mut p, &mut next);
    }
    let total: f64 = p.iter().sum();
    assert!((total - 1.0).abs() <= 1e-10, "total {total}");
    assert!(p.iter().all(|&v| v >= 0.0));
}

#[test]
fn stationary_is_a_fixed_point() {
    for n in 2..=256 {
        let pi = stationary(n).unwrap();
        let chain = WeightChain::new(n).unwrap();
        let mut next = vec![0.0; n + 1];
        chain.step_forward(&pi.probs, &mut next);
        let err = pi
            .probs
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12, "n={n}: {err}");
    }
}

#[test]
fn stationary_closed_form_small_n() {
    // C(5,m) 3^m / 1023
    let pi = stationary(5).unwrap();
    for m in 1..=5 {
        let want = binomial(5, m as u64) as f64 * 3f64.powi(m as i32) / 1023.0;
        assert!((pi.probs[m] - want).abs() < 1e-15);
    }
    assert_eq!(pi.probs[0], 0.0);
}

#[test]
fn evolve_agrees_with_exact_rationals() {
    for (n, l0, t) in [(6, 1, 20), (20, 3, 200), (64, 1, 500)] {
        let f = evolve(n, l0, t).unwrap();
        let e = evolve_exact(n, l0, t).unwrap();
        assert_eq!(e.total(), BigRational::one());
        for (a, b) in f.probs.iter().zip(e.to_f64()) {
            assert!((a - b).abs() <= 1e-13, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn evolution_approaches_stationary() {
    let n = 16;
    let pi = stationary(n).unwrap();
    let tv: Vec<f64> = [50, 100, 200, 400, 800]
        .iter()
        .map(|&t| evolve(n, 1, t).unwrap().total_variation(&pi))
        .collect();
    assert!(tv.windows(2).all(|w| w[1] <= w[0]), "{tv:?}");
    assert!(tv[4] < 1e-6);
}

#[test]
fn union_bound_matches_rational_oracle() {
    let oracle = union_bound_oracle(10, 2, 2, 300);
    let want = oracle.to_f64().unwrap();
    let got = union_bound(10, 2, 2, 300).unwrap();
    assert!(((got - want) / want).abs() <= 1e-10, "{got} vs {want}");
    assert_eq!(union_bound_exact(10, 2, 2, 300).unwrap(), oracle);
    assert_eq!(
        union_bound_oracle(2, 1, 1, 1),
        BigRational::new(14.into(), 5.into())
    );
    for (n, k, d, t) in [(6, 1, 2, 0), (8, 2, 3, 50), (12, 3, 1, 120)] {
        let want = union_bound_oracle(n, k, d, t).to_f64().unwrap();
        let got = union_bound(n, k, d, t).unwrap();
        assert!(((got - want) / want).abs() <= 1e-10, "{n} {k} {d} {t}");
    }
}

#[test]
fn union_bound_tends_to_stationary_value() {
    let (n, k) = (8usize, 2usize);
    let pi = stationary(n).unwrap();
    for d in 1..=3 {
        let tail: f64 = pi.probs[1..=d].iter().sum();
        let want = (2f64.powi((n + k) as i32) - 1.0) * tail;
        let got = union_bound(n, k, d, 20_000).unwrap();
        assert!(((got - want) / want).abs() < 1e-9, "d={d}: {got} vs {want}");
    }
}

#[test]
fn coefficient_sums_are_bounded() {
    for (n, k) in [(20usize, 5usize), (64, 16), (128, 32)] {
        for l in 0..=n {
            let s = coefficient_sum(n, k, l).unwrap();
            let b = coefficient_bound(n, k, l).unwrap();
            assert!(s <= b * (1.0 + 1e-12), "n={n} k={k} l={l}: {s} > {b}");
        }
    }
}

#[test]
fn coefficient_sums_match_integers() {
    let (n, k) = (40u64, 7u64);
    for l in 0..=n {
        let mut exact = 0u128;
        for p in 0..=l.min(k) {
            exact += binomial(k, p) * 3u128.pow(p as u32) * binomial(n - k, l - p);
        }
        let got = coefficient_sum(n as usize, k as usize, l as usize).unwrap();
        assert!((got - exact as f64).abs() <= 1e-10 * exact as f64, "l={l}");
    }
}

#[test]
fn vandermonde_identity() {
    fn big_binomial(n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
    }
    for (n, k) in [(20u64, 5u64), (64, 16), (128, 32)] {
        for l in 0..=n {
            let lhs: BigUint = (0..=l.min(k))
                .map(|p| big_binomial(k, p) * big_binomial(n - k, l - p))
                .sum();
            assert_eq!(lhs, big_binomial(n, l), "n={n} k={k} l={l}");
        }
    }
}

#[test]
fn closed_form_regression() {
    let b = closed_form_failure_bound(1024, 100, 50, 0.01).unwrap();
    assert!((b.log2_second_term - (-525.8804195208796)).abs() < 1e-9);
    assert!((b.first_term - 8.271806125530277e-25).abs() < 1e-36);
    assert!((b.value - 8.271806125530277e-25).abs() < 1e-36);
}
