//! Sequential random two-qubit Clifford circuits and their parallelization.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{check_pair, CliffordTableau, TwoQubitCliffordTable};
use crate::error::{arg, Error, Result};

/// A two-qubit gate: table entry `c` with local qubit 0 on `i` and local
/// qubit 1 on `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub i: usize,
    pub j: usize,
    #[serde(rename = "c")]
    pub clifford_index: usize,
}

impl Gate {
    pub fn new(i: usize, j: usize, clifford_index: usize) -> Self {
        Gate {
            i,
            j,
            clifford_index,
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        self.i == q || self.j == q
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub seed: Option<u64>,
}

/// On-disk circuit format.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CircuitFile {
    n: usize,
    seed: Option<u64>,
    gate_table_checksum: String,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            n,
            gates,
            seed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self, table: &TwoQubitCliffordTable) -> Result<()> {
        for g in &self.gates {
            check_pair(self.n, g.i, g.j)?;
            if g.clifford_index >= table.len() {
                return arg(format!("gate index {} out of range", g.clifford_index));
            }
        }
        Ok(())
    }

    /// Composition of the gates in order, starting from the identity.
    pub fn to_tableau(&self, table: &TwoQubitCliffordTable) -> Result<CliffordTableau> {
        if self.n == 0 {
            return arg("circuit on zero qubits");
        }
        let mut tab = CliffordTableau::identity(self.n);
        for g in &self.gates {
            tab.apply_gate_mut(table, g.clifford_index, g.i, g.j)?;
        }
        Ok(tab)
    }

    /// Number of gates on each wire.
    pub fn wire_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for g in &self.gates {
            counts[g.i] += 1;
            counts[g.j] += 1;
        }
        counts
    }

    pub fn max_wire_count(&self) -> usize {
        self.wire_counts().into_iter().max().unwrap_or(0)
    }

    /// Gate subsequence acting on qubit `q`.
    pub fn wire_sequence(&self, q: usize) -> Vec<Gate> {
        self.gates
            .iter()
            .filter(|g| g.touches(q))
            .copied()
            .collect()
    }

    pub fn to_json(&self, table: &TwoQubitCliffordTable) -> String {
        let file = CircuitFile {
            n: self.n,
            seed: self.seed,
            gate_table_checksum: table.checksum().to_string(),
            gates: self.gates.clone(),
        };
        serde_json::to_string_pretty(&file).expect("circuit serializes")
    }

    /// Parses a circuit file, rejecting files written against a different
    /// gate table.
    pub fn from_json(text: &str, table: &TwoQubitCliffordTable) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)
            .map_err(|e| Error::Argument(format!("malformed circuit file: {e}")))?;
        if file.gate_table_checksum != table.checksum() {
            return Err(Error::Checksum {
                found: file.gate_table_checksum,
                expected: table.checksum().to_string(),
            });
        }
        let c = Circuit {
            n: file.n,
            gates: file.gates,
            seed: file.seed,
        };
        c.validate(table)?;
        Ok(c)
    }
}

/// Draws `t` gates, each on a uniformly random ordered pair `i ≠ j` with an
/// independent uniform table entry.
pub fn sample_circuit<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    table: &TwoQubitCliffordTable,
    rng: &mut R,
) -> Result<Circuit> {
    if n < 2 {
        return arg(format!("random circuits need n ≥ 2, got {n}"));
    }
    let gates = (0..t)
        .map(|_| {
            let (i, j) = sample_pair(n, rng);
            Gate::new(i, j, table.sample_gate_index(rng))
        })
        .collect();
    Ok(Circuit::new(n, gates))
}

pub(crate) fn sample_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub n: usize,
    pub layers: Vec<Vec<Gate>>,
}

impl LayeredCircuit {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Layers concatenated in order.
    pub fn flatten(&self) -> Circuit {
        Circuit::new(self.n, self.layers.iter().flatten().copied().collect())
    }

    pub fn layers_are_disjoint(&self) -> bool {
        let mut used = vec![usize::MAX; self.n];
        for (li, layer) in self.layers.iter().enumerate() {
            for g in layer {
                if used[g.i] == li || used[g.j] == li {
                    return false;
                }
                used[g.i] = li;
                used[g.j] = li;
            }
        }
        true
    }

    pub fn to_tableau(&self, table: &TwoQubitCliffordTable) -> Result<CliffordTableau> {
        self.flatten().to_tableau(table)
    }
}

/// Greedy leveling: gates are appended to the current layer until one
/// shares a qubit with a gate already there; that gate opens a new layer.
pub fn parallelize(c: &Circuit) -> LayeredCircuit {
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    let mut current: Vec<Gate> = Vec::new();
    let mut used = vec![false; c.n];
    for g in &c.gates {
        if used[g.i] || used[g.j] {
            for old in &current {
                used[old.i] = false;
                used[old.j] = false;
            }
            layers.push(std::mem::take(&mut current));
        }
        used[g.i] = true;
        used[g.j] = true;
        current.push(*g);
    }
    if !current.is_empty() {
        layers.push(current);
    }
    LayeredCircuit { n: c.n, layers }
}

/// As-soon-as-possible leveling: each gate goes to the first layer after
/// the last layer used by either of its qubits.
pub fn parallelize_asap(c: &Circuit) -> LayeredCircuit {
    let mut next_free = vec![0usize; c.n];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in &c.gates {
        let level = next_free[g.i].max(next_free[g.j]);
        if level == layers.len() {
            layers.push(Vec::new());
        }
        layers[level].push(*g);
        next_free[g.i] = level + 1;
        next_free[g.j] = level + 1;
    }
    LayeredCircuit { n: c.n, layers }
}
