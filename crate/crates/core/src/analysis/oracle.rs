//! Dense statevector check of the Knill–Laflamme conditions.
//!
//! Codewords `|x̄⟩ = U |x⟩|0…0⟩` are built by running each gate's generator
//! word on a dense state, then `⟨x̄|σ_μ|ȳ⟩` is tested against `C_μ δ_xy` for
//! every `μ` of weight `1..=d_max`. Nothing here touches tableau algebra, so
//! it serves as an independent reference for [`super::distance_exact`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::clifford::{Generator, TwoQubitCliffordTable};
use crate::error::{arg, Error, Result};

pub const DEFAULT_ORACLE_LIMIT: usize = 8;

/// Absolute tolerance for the `C_μ δ_xy` comparison.
pub const KL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`; bit `q` of `index` is qubit `q`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn apply_h(&mut self, q: usize) {
        let bit = 1 << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let a0 = self.amps[b];
                let a1 = self.amps[b | bit];
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | bit] = (a0 - a1) * s;
            }
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        let bit = 1 << q;
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & bit != 0 {
                *a *= Complex64::i();
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1 << control, 1 << target);
        for b in 0..self.amps.len() {
            if b & cb != 0 && b & tb == 0 {
                self.amps.swap(b, b | tb);
            }
        }
    }

    /// Runs a generator with local qubits 0, 1 placed on `i`, `j`.
    pub fn apply_generator(&mut self, g: Generator, i: usize, j: usize) {
        let wire = |l: u8| if l == 0 { i } else { j };
        match g {
            Generator::H(l) => self.apply_h(wire(l)),
            Generator::S(l) => self.apply_s(wire(l)),
            Generator::Cx(c, t) => self.apply_cx(wire(c), wire(t)),
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit, table: &TwoQubitCliffordTable) {
        for g in &c.gates {
            for &gen in table.word(g.clifford_index) {
                self.apply_generator(gen, g.i, g.j);
            }
        }
    }

    /// `σ_μ |ψ⟩` for the Pauli with masks `x`, `z` (bit q = qubit q).
    pub fn apply_pauli_masks(&self, x: usize, z: usize) -> StateVector {
        // σ|b⟩ = i^{#Y} (−1)^{|b ∧ z|} |b ⊕ x⟩
        let y_phase = Complex64::i().powu((x & z).count_ones());
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let sign = if (b & z).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ x] = a * y_phase * sign;
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Smallest violating weight, or `d_max + 1` if none up to `d_max`.
    pub distance: usize,
    /// Paulis whose `C_μ` came out non-real (not expected for Clifford
    /// encoders).
    pub complex_constants: usize,
    pub checked: u64,
}

pub fn kl_oracle_distance(
    c: &Circuit,
    table: &TwoQubitCliffordTable,
    k: usize,
    d_max: usize,
) -> Result<usize> {
    Ok(kl_oracle(c, table, k, d_max, DEFAULT_ORACLE_LIMIT)?.distance)
}

pub fn kl_oracle(
    c: &Circuit,
    table: &TwoQubitCliffordTable,
    k: usize,
    d_max: usize,
    limit: usize,
) -> Result<OracleReport> {
    let n = c.n;
    if n > limit {
        return Err(Error::OracleLimit { n, limit });
    }
    if k == 0 || k > n {
        return arg(format!("need 1 ≤ k ≤ n, got n={n}, k={k}"));
    }
    if d_max > n {
        return arg(format!("d_max {d_max} exceeds n = {n}"));
    }
    c.validate(table)?;
    let codewords: Vec<StateVector> = (0..1usize << k)
        .map(|x| {
            let mut s = StateVector::basis(n, x);
            s.apply_circuit(c, table);
            s
        })
        .collect();

    let mut complex_constants = 0;
    let mut checked = 0u64;
    for w in 1..=d_max {
        let mut violated = false;
        for_each_pauli_of_weight(n, w, &mut |x, z| {
            if violated {
                return;
            }
            checked += 1;
            match kl_holds(&codewords, x, z) {
                Some(mean) => {
                    if mean.im.abs() > KL_TOLERANCE {
                        complex_constants += 1;
                    }
                }
                None => violated = true,
            }
        });
        if violated {
            return Ok(OracleReport {
                distance: w,
                complex_constants,
                checked,
            });
        }
    }
    Ok(OracleReport {
        distance: d_max + 1,
        complex_constants,
        checked,
    })
}

/// Returns the common diagonal value if `⟨x̄|σ|ȳ⟩ = C δ_xy` holds.
fn kl_holds(codewords: &[StateVector], x: usize, z: usize) -> Option<Complex64> {
    let images: Vec<StateVector> = codewords
        .iter()
        .map(|s| s.apply_pauli_masks(x, z))
        .collect();
    let mut diag = Vec::with_capacity(codewords.len());
    for (a, bra) in codewords.iter().enumerate() {
        for (b, ket) in images.iter().enumerate() {
            let v = bra.inner(ket);
            if a == b {
                diag.push(v);
            } else if v.norm() > KL_TOLERANCE {
                return None;
            }
        }
    }
    let mean = diag.iter().sum::<Complex64>() / diag.len() as f64;
    if diag.iter().all(|v| (v - mean).norm() <= KL_TOLERANCE) {
        Some(mean)
    } else {
        None
    }
}

/// Calls `f(x_mask, z_mask)` for every Pauli on `n` qubits of weight `w`.
fn for_each_pauli_of_weight(n: usize, w: usize, f: &mut impl FnMut(usize, usize)) {
    fn support(
        n: usize,
        w: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == w {
            f(chosen);
            return;
        }
        for q in start..n {
            chosen.push(q);
            support(n, w, q + 1, chosen, f);
            chosen.pop();
        }
    }
    let mut chosen = Vec::with_capacity(w);
    support(n, w, 0, &mut chosen, &mut |qs| {
        let combos = 3usize.pow(qs.len() as u32);
        for mut code in 0..combos {
            let (mut x, mut z) = (0usize, 0usize);
            for &q in qs {
                // X, Y, Z
                match code % 3 {
                    0 => x |= 1 << q,
                    1 => {
                        x |= 1 << q;
                        z |= 1 << q;
                    }
                    _ => z |= 1 << q,
                }
                code /= 3;
            }
            f(x, z);
        }
    });
}
