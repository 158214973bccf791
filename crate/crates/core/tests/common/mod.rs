#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use stabcodes::analysis::StateVector;
use stabcodes::{Letter, PauliString};

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(l: Letter) -> [[Complex64; 2]; 2] {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match l {
        Letter::I => [[o, z], [z, o]],
        Letter::X => [[z, o], [o, z]],
        Letter::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        Letter::Z => [[o, z], [z, -o]],
    }
}

/// Dense matrix of `p`, built entry by entry as a tensor product. Basis
/// index bit `q` is qubit `q`.
pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let n = p.num_qubits();
    let dim = 1 << n;
    let scale = Complex64::i().powu(p.phase() as u32);
    let letters: Vec<Letter> = p.letters().collect();
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|col| {
                    letters.iter().enumerate().fold(scale, |acc, (q, &l)| {
                        acc * letter_matrix(l)[(r >> q) & 1][(col >> q) & 1]
                    })
                })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn dagger(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
        .collect()
}

pub fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - y).norm() <= tol)
}

/// Unitary with columns `f(|b⟩)`.
pub fn unitary_from(n: usize, f: impl Fn(&mut StateVector)) -> Matrix {
    let dim = 1 << n;
    let columns: Vec<StateVector> = (0..dim)
        .map(|col| {
            let mut s = StateVector::basis(n, col);
            f(&mut s);
            s
        })
        .collect();
    (0..dim)
        .map(|r| columns.iter().map(|s| s.amplitudes()[r]).collect())
        .collect()
}

/// All `4^n` Paulis with sign +1.
pub fn all_paulis(n: usize) -> Vec<PauliString> {
    (0..1usize << (2 * n))
        .map(|code| {
            let letters: Vec<Letter> = (0..n).map(|q| Letter::ALL[(code >> (2 * q)) & 3]).collect();
            PauliString::from_letters(&letters)
        })
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Forward evolution of each start weight with integer numerators over
/// `(5n(n−1))^t`, summed against the weight-class counts.
pub fn union_bound_oracle(n: usize, k: usize, d: usize, t: usize) -> BigRational {
    let denom = 5 * n * (n - 1);
    let rows: Vec<(u64, u64, u64)> = (0..=n)
        .map(|l| {
            let down = 2 * l * l.saturating_sub(1);
            let up = 6 * l * (n - l);
            (down as u64, (denom - down - up) as u64, up as u64)
        })
        .collect();
    let mut total = BigInt::zero();
    for l0 in 1..=n {
        let mut p = vec![BigInt::zero(); n + 1];
        p[l0] = BigInt::one();
        for _ in 0..t {
            let mut next = vec![BigInt::zero(); n + 1];
            for l in 1..=n {
                if p[l].is_zero() {
                    continue;
                }
                let (down, stay, up) = rows[l];
                next[l - 1] += &p[l] * down;
                next[l] += &p[l] * stay;
                if l < n {
                    next[l + 1] += &p[l] * up;
                }
            }
            p = next;
        }
        let hit: BigInt = p[1..=d].iter().sum();
        let mut coef = 0u128;
        for q in 0..=l0.min(k) {
            coef += binomial(k as u64, q as u64)
                * 3u128.pow(q as u32)
                * binomial((n - k) as u64, (l0 - q) as u64);
        }
        total += hit * BigInt::from(coef);
    }
    BigRational::new(total, BigInt::from(denom).pow(t as u32))
}
