//! Code distance of the stabilizer code defined by an encoding tableau.
//!
//! Logical inputs occupy qubits `0..k`, ancillas `k..n` start in `|0⟩`. The
//! distance is the minimum weight of `U σ_ν U†` over `ν = ν_A ν_B` with
//! `ν_A ∈ {I,X,Y,Z}^k ∖ {I^k}` and `ν_B ∈ {I,Z}^{n−k}`.
//!
//! Candidate `ν` are addressed by a natural index with `n + k` bits: bit `a`
//! is the x bit of logical qubit `a`, bit `k + a` its z bit, and bit
//! `2k + b` the z bit of ancilla `k + b`. Exact enumeration walks this index
//! space in Gray-code order so consecutive candidates differ in a single
//! generator, and the conjugated image is updated with one XOR per step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordTableau;
use crate::error::{arg, Error, Result};
use crate::pauli::{Letter, PauliString};

/// Default cap on the number of candidate Paulis for exact enumeration.
pub const DEFAULT_EXACT_BUDGET: u128 = 1 << 26;

const SEGMENT_LEN: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
}

impl CodeParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return arg(format!("need 1 ≤ k ≤ n, got n={n}, k={k}"));
        }
        Ok(CodeParams { n, k })
    }

    /// Number of qualifying `ν`: (4^k − 1)·2^(n−k).
    pub fn candidate_count(&self) -> u128 {
        let a = 1u128.checked_shl(2 * self.k as u32).map(|v| v - 1);
        let b = 1u128.checked_shl((self.n - self.k) as u32);
        match (a, b) {
            (Some(a), Some(b)) => a.saturating_mul(b),
            _ => u128::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: usize,
    pub witness: PauliString,
    pub witness_image: PauliString,
    pub method: DistanceMethod,
    /// Candidates examined.
    pub examined: u64,
}

/// Images of the candidate generators, as flat x/z word blocks.
struct GeneratorImages {
    words: usize,
    /// `2 * words` entries per generator: x words then z words.
    data: Vec<u64>,
    bits: usize,
}

impl GeneratorImages {
    fn new(tab: &CliffordTableau, k: usize) -> Self {
        let n = tab.num_qubits();
        let words = n.div_ceil(64);
        let mut data = Vec::with_capacity((n + k) * 2 * words);
        let mut push = |p: &PauliString| {
            data.extend_from_slice(p.x_words());
            data.extend_from_slice(p.z_words());
        };
        for a in 0..k {
            push(tab.x_image(a));
        }
        for a in 0..k {
            push(tab.z_image(a));
        }
        for b in k..n {
            push(tab.z_image(b));
        }
        GeneratorImages {
            words,
            data,
            bits: n + k,
        }
    }

    #[inline]
    fn xor_into(&self, bit: usize, acc: &mut [u64]) {
        let block = &self.data[bit * 2 * self.words..(bit + 1) * 2 * self.words];
        for (a, b) in acc.iter_mut().zip(block) {
            *a ^= b;
        }
    }

    fn image_of(&self, index: u64, acc: &mut [u64]) {
        acc.fill(0);
        let mut rest = index;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            self.xor_into(bit, acc);
            rest &= rest - 1;
        }
    }

    #[inline]
    fn weight(&self, acc: &[u64]) -> u32 {
        let (x, z) = acc.split_at(self.words);
        x.iter().zip(z).map(|(a, b)| (a | b).count_ones()).sum()
    }
}

/// Candidate Pauli for a natural index.
fn candidate_pauli(n: usize, k: usize, index: u64) -> PauliString {
    let mut p = PauliString::identity(n);
    for a in 0..k {
        let x = index >> a & 1 == 1;
        let z = index >> (k + a) & 1 == 1;
        p.set_letter(a, Letter::from_bits(x, z));
    }
    for b in 0..n - k {
        if index >> (2 * k + b) & 1 == 1 {
            p.set_letter(k + b, Letter::Z);
        }
    }
    p
}

fn check_params(tab: &CliffordTableau, k: usize) -> Result<CodeParams> {
    CodeParams::new(tab.num_qubits(), k)
}

fn report(
    tab: &CliffordTableau,
    k: usize,
    index: u64,
    method: DistanceMethod,
    examined: u64,
) -> Result<DistanceReport> {
    let witness = candidate_pauli(tab.num_qubits(), k, index);
    let witness_image = tab.conjugate(&witness)?;
    Ok(DistanceReport {
        distance: witness_image.weight(),
        witness,
        witness_image,
        method,
        examined,
    })
}

pub fn distance_exact(tab: &CliffordTableau, k: usize) -> Result<DistanceReport> {
    distance_exact_with_budget(tab, k, DEFAULT_EXACT_BUDGET)
}

/// Exhaustive minimum over all qualifying `ν`. Ties go to the smallest
/// natural index, so the witness does not depend on how the index space is
/// split across workers.
pub fn distance_exact_with_budget(
    tab: &CliffordTableau,
    k: usize,
    budget: u128,
) -> Result<DistanceReport> {
    let params = check_params(tab, k)?;
    let size = params.candidate_count();
    if size > budget || params.n + k > 63 {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let gens = GeneratorImages::new(tab, k);
    let total = 1u64 << gens.bits;
    let segments: Vec<(u64, u64)> = (0..total.div_ceil(SEGMENT_LEN))
        .map(|s| (s * SEGMENT_LEN, ((s + 1) * SEGMENT_LEN).min(total)))
        .collect();
    let logical_mask = (1u64 << (2 * k)) - 1;

    let scan = |&(start, end): &(u64, u64)| -> Option<(u32, u64)> {
        let mut acc = vec![0u64; 2 * gens.words];
        let mut code = start ^ (start >> 1);
        gens.image_of(code, &mut acc);
        let mut best: Option<(u32, u64)> = None;
        let mut i = start;
        loop {
            if code & logical_mask != 0 {
                let cand = (gens.weight(&acc), code);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
            i += 1;
            if i == end {
                break;
            }
            let bit = i.trailing_zeros() as usize;
            code ^= 1 << bit;
            gens.xor_into(bit, &mut acc);
        }
        best
    };

    #[cfg(feature = "parallel")]
    let best = {
        use rayon::prelude::*;
        segments.par_iter().filter_map(scan).min()
    };
    #[cfg(not(feature = "parallel"))]
    let best = segments.iter().filter_map(scan).min();

    let (_, index) = best.expect("k ≥ 1 gives at least one candidate");
    report(tab, k, index, DistanceMethod::Exact, size as u64)
}

/// Minimum image weight over `samples` uniformly drawn qualifying `ν`. The
/// result is never below the true distance.
pub fn distance_monte_carlo<R: Rng + ?Sized>(
    tab: &CliffordTableau,
    k: usize,
    samples: u64,
    rng: &mut R,
) -> Result<DistanceReport> {
    let params = check_params(tab, k)?;
    if samples == 0 {
        return arg("need at least one sample");
    }
    if params.n + k > 63 {
        return distance_monte_carlo_wide(tab, k, samples, rng);
    }
    let gens = GeneratorImages::new(tab, k);
    let logical_states = 1u64 << (2 * k);
    let ancillas = params.n - k;
    let mut acc = vec![0u64; 2 * gens.words];
    let mut best: Option<(u32, u64)> = None;
    for _ in 0..samples {
        let a = rng.random_range(1..logical_states);
        let b = if ancillas == 0 {
            0
        } else {
            rng.random::<u64>() & ((1u64 << ancillas) - 1)
        };
        let index = a | b << (2 * k);
        gens.image_of(index, &mut acc);
        let cand = (gens.weight(&acc), index);
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
    }
    let (_, index) = best.expect("samples ≥ 1");
    report(tab, k, index, DistanceMethod::MonteCarlo, samples)
}

/// Sampling path for codes whose candidate index does not fit in a word.
fn distance_monte_carlo_wide<R: Rng + ?Sized>(
    tab: &CliffordTableau,
    k: usize,
    samples: u64,
    rng: &mut R,
) -> Result<DistanceReport> {
    let n = tab.num_qubits();
    let mut best: Option<(usize, PauliString, PauliString)> = None;
    for _ in 0..samples {
        let mut nu = PauliString::identity(n);
        loop {
            for a in 0..k {
                nu.set_letter(a, Letter::ALL[rng.random_range(0..4)]);
            }
            if (0..k).any(|a| nu.letter(a) != Letter::I) {
                break;
            }
        }
        for b in k..n {
            let l = if rng.random::<bool>() {
                Letter::Z
            } else {
                Letter::I
            };
            nu.set_letter(b, l);
        }
        let img = tab.conjugate(&nu)?;
        let w = img.weight();
        if best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
            best = Some((w, nu, img));
        }
    }
    let (distance, witness, witness_image) = best.expect("samples ≥ 1");
    Ok(DistanceReport {
        distance,
        witness,
        witness_image,
        method: DistanceMethod::MonteCarlo,
        examined: samples,
    })
}
