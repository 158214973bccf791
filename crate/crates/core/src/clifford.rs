//! Clifford unitaries as tableaux and the two-qubit Clifford group.
//!
//! A [`CliffordTableau`] stores the signed images `U X_q U†` and `U Z_q U†`
//! of the 2n generators. Global phase is quotiented out.
//!
//! [`TwoQubitCliffordTable`] materializes all 11,520 two-qubit Cliffords
//! (modulo phase) by closing the Hadamard, phase and CNOT tableaux under
//! composition. Entries are sorted canonically, so a gate is identified by
//! its index in the table. Each entry also keeps a generator word that
//! realizes it, which lets dense simulators replay the gate independently of
//! the tableau arithmetic.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{arg, Result};
use crate::pauli::{check_dims, Letter, PauliString};

/// Order of the two-qubit Clifford group modulo phase: |Sp(4,2)| · 2⁴.
pub const TWO_QUBIT_CLIFFORD_COUNT: usize = 11_520;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl std::fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let xs: Vec<String> = self.x_images.iter().map(|p| p.to_string()).collect();
        let zs: Vec<String> = self.z_images.iter().map(|p| p.to_string()).collect();
        f.debug_struct("CliffordTableau")
            .field("x_images", &xs)
            .field("z_images", &zs)
            .finish()
    }
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "tableau needs at least one qubit");
        CliffordTableau {
            n,
            x_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::X))
                .collect(),
            z_images: (0..n)
                .map(|q| PauliString::single(n, q, Letter::Z))
                .collect(),
        }
    }

    /// Builds a tableau from generator images, checking Hermiticity and the
    /// symplectic commutation relations.
    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let n = x_images.len();
        if n == 0 || z_images.len() != n {
            return arg("need n ≥ 1 X images and the same number of Z images");
        }
        for p in x_images.iter().chain(&z_images) {
            check_dims(p.num_qubits(), n)?;
            if !p.is_hermitian() {
                return arg(format!("image {p} is not Hermitian"));
            }
        }
        let tab = CliffordTableau {
            n,
            x_images,
            z_images,
        };
        if !tab.is_symplectic() {
            return arg("images violate the symplectic commutation relations");
        }
        Ok(tab)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    pub fn x_images(&self) -> &[PauliString] {
        &self.x_images
    }

    pub fn z_images(&self) -> &[PauliString] {
        &self.z_images
    }

    /// `X_i` images anticommute with the matching `Z_i` image and commute
    /// with everything else.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let xz = self.x_images[a].anticommutes_unchecked(&self.z_images[b]);
                if xz != (a == b) {
                    return false;
                }
                if b > a
                    && (self.x_images[a].anticommutes_unchecked(&self.x_images[b])
                        || self.z_images[a].anticommutes_unchecked(&self.z_images[b]))
                {
                    return false;
                }
            }
        }
        true
    }

    /// `U p U†`, as the phase-tracked product of the generator images picked
    /// out by the bits of `p`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        check_dims(self.n, p.num_qubits())?;
        // Each Y letter is i·XZ, so start from i^(phase + #Y) and multiply
        // X then Z images qubit by qubit.
        let mut acc = PauliString::identity(self.n);
        let mut phase = p.phase() as u32;
        for q in 0..self.n {
            let (x, z) = p.letter(q).bits();
            if x && z {
                phase += 1;
            }
            if x {
                acc.mul_assign_right(&self.x_images[q]);
            }
            if z {
                acc.mul_assign_right(&self.z_images[q]);
            }
        }
        acc.set_phase(((acc.phase() as u32 + phase) % 4) as u8);
        Ok(acc)
    }

    /// Tableau of "apply `self`, then `next`".
    pub fn followed_by(&self, next: &CliffordTableau) -> Result<CliffordTableau> {
        check_dims(self.n, next.n)?;
        let map = |ps: &[PauliString]| -> Result<Vec<PauliString>> {
            ps.iter().map(|p| next.conjugate(p)).collect()
        };
        Ok(CliffordTableau {
            n: self.n,
            x_images: map(&self.x_images)?,
            z_images: map(&self.z_images)?,
        })
    }

    /// Tableau of `g_{ij} ∘ U`: the table entry `gate_index` acting with its
    /// local qubit 0 on `i` and local qubit 1 on `j`.
    pub fn apply_gate(
        &self,
        table: &TwoQubitCliffordTable,
        gate_index: usize,
        i: usize,
        j: usize,
    ) -> Result<CliffordTableau> {
        let mut out = self.clone();
        out.apply_gate_mut(table, gate_index, i, j)?;
        Ok(out)
    }

    pub fn apply_gate_mut(
        &mut self,
        table: &TwoQubitCliffordTable,
        gate_index: usize,
        i: usize,
        j: usize,
    ) -> Result<()> {
        check_pair(self.n, i, j)?;
        if gate_index >= table.len() {
            return arg(format!("gate index {gate_index} out of range"));
        }
        let map = &table.local_maps[gate_index];
        for p in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            map.apply(p, i, j);
            debug_assert!(p.is_hermitian());
        }
        Ok(())
    }

    /// Key used for the canonical ordering of two-qubit tableaux: image bits
    /// packed as nibbles `X0 X1 Z0 Z1` (most significant first), then the
    /// four sign bits in the same order.
    fn canonical_key(&self) -> (u16, u8) {
        debug_assert_eq!(self.n, 2);
        let nibble = |p: &PauliString| -> u16 {
            (p.x_words()[0] as u16 & 0b11) | ((p.z_words()[0] as u16 & 0b11) << 2)
        };
        let sign = |p: &PauliString| -> u8 { p.is_negative() as u8 };
        let imgs = [
            &self.x_images[0],
            &self.x_images[1],
            &self.z_images[0],
            &self.z_images[1],
        ];
        let mut bits = 0u16;
        let mut signs = 0u8;
        for p in imgs {
            bits = (bits << 4) | nibble(p);
            signs = (signs << 1) | sign(p);
        }
        (bits, signs)
    }
}

pub(crate) fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return arg(format!("gate acts on qubit {i} twice"));
    }
    if i >= n || j >= n {
        return arg(format!("pair ({i},{j}) out of range for {n} qubits"));
    }
    Ok(())
}

/// Hadamard, phase and CNOT on the two local qubits of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    H(u8),
    S(u8),
    /// CNOT with (control, target).
    Cx(u8, u8),
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::H(0),
        Generator::H(1),
        Generator::S(0),
        Generator::S(1),
        Generator::Cx(0, 1),
        Generator::Cx(1, 0),
    ];

    pub fn tableau(self) -> CliffordTableau {
        let p = |s: &str| -> PauliString { s.parse().expect("static Pauli") };
        let (x, z) = match self {
            Generator::H(0) => (["ZI", "IX"], ["XI", "IZ"]),
            Generator::H(_) => (["XI", "IZ"], ["ZI", "IX"]),
            Generator::S(0) => (["YI", "IX"], ["ZI", "IZ"]),
            Generator::S(_) => (["XI", "IY"], ["ZI", "IZ"]),
            Generator::Cx(0, _) => (["XX", "IX"], ["ZI", "ZZ"]),
            Generator::Cx(..) => (["XI", "XX"], ["ZZ", "IZ"]),
        };
        CliffordTableau {
            n: 2,
            x_images: x.iter().map(|s| p(s)).collect(),
            z_images: z.iter().map(|s| p(s)).collect(),
        }
    }
}

/// Action of one two-qubit gate on the 16 local letter patterns. Pattern
/// bits are `x_i | z_i << 1 | x_j << 2 | z_j << 3`; each entry holds the
/// image pattern and the phase picked up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalMap {
    image: [u8; 16],
    phase: [u8; 16],
}

impl LocalMap {
    fn from_tableau(tab: &CliffordTableau) -> Self {
        let mut image = [0u8; 16];
        let mut phase = [0u8; 16];
        for pat in 0..16u8 {
            let letters = [
                Letter::from_bits(pat & 1 != 0, pat & 2 != 0),
                Letter::from_bits(pat & 4 != 0, pat & 8 != 0),
            ];
            let out = tab
                .conjugate(&PauliString::from_letters(&letters))
                .expect("two-qubit tableau");
            assert!(out.is_hermitian(), "Clifford image of a Hermitian Pauli");
            let (x0, z0) = out.letter(0).bits();
            let (x1, z1) = out.letter(1).bits();
            image[pat as usize] = x0 as u8 | (z0 as u8) << 1 | (x1 as u8) << 2 | (z1 as u8) << 3;
            phase[pat as usize] = out.phase();
        }
        LocalMap { image, phase }
    }

    /// Conjugates `p` in place by the gate placed on qubits `(i, j)`.
    #[inline]
    pub fn apply(&self, p: &mut PauliString, i: usize, j: usize) {
        let (wi, bi) = (i / 64, i % 64);
        let (wj, bj) = (j / 64, j % 64);
        let pat = {
            let xs = p.x_words();
            let zs = p.z_words();
            ((xs[wi] >> bi) & 1)
                | ((zs[wi] >> bi) & 1) << 1
                | ((xs[wj] >> bj) & 1) << 2
                | ((zs[wj] >> bj) & 1) << 3
        } as usize;
        if pat == 0 {
            return;
        }
        let img = self.image[pat] as u64;
        let set = |words: &mut [u64], w: usize, b: usize, v: u64| {
            words[w] = (words[w] & !(1u64 << b)) | (v << b);
        };
        set(p.x_words_mut(), wi, bi, img & 1);
        set(p.z_words_mut(), wi, bi, (img >> 1) & 1);
        set(p.x_words_mut(), wj, bj, (img >> 2) & 1);
        set(p.z_words_mut(), wj, bj, (img >> 3) & 1);
        let ph = (p.phase() + self.phase[pat]) % 4;
        p.set_phase(ph);
    }
}

pub struct TwoQubitCliffordTable {
    entries: Vec<CliffordTableau>,
    words: Vec<Vec<Generator>>,
    local_maps: Vec<LocalMap>,
    checksum: String,
}

impl std::fmt::Debug for TwoQubitCliffordTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoQubitCliffordTable")
            .field("len", &self.entries.len())
            .field("checksum", &self.checksum)
            .finish()
    }
}

impl TwoQubitCliffordTable {
    /// Breadth-first closure of the generator tableaux, sorted canonically.
    pub fn enumerate() -> Self {
        let identity = CliffordTableau::identity(2);
        let gens: Vec<(Generator, CliffordTableau)> =
            Generator::ALL.iter().map(|&g| (g, g.tableau())).collect();

        let mut seen: HashMap<(u16, u8), usize> = HashMap::new();
        let mut found: Vec<(CliffordTableau, Vec<Generator>)> = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.canonical_key(), 0);
        found.push((identity, Vec::new()));
        queue.push_back(0usize);
        while let Some(idx) = queue.pop_front() {
            for (g, gt) in &gens {
                let next = found[idx].0.followed_by(gt).expect("two-qubit tableaux");
                let key = next.canonical_key();
                if seen.contains_key(&key) {
                    continue;
                }
                let mut word = found[idx].1.clone();
                word.push(*g);
                seen.insert(key, found.len());
                queue.push_back(found.len());
                found.push((next, word));
            }
        }

        found.sort_by_key(|(t, _)| t.canonical_key());
        let mut hasher = Sha256::new();
        for (t, _) in &found {
            let (bits, signs) = t.canonical_key();
            hasher.update(bits.to_be_bytes());
            hasher.update([signs]);
        }
        let digest = hasher.finalize();
        let mut checksum = String::with_capacity(64);
        for b in digest.iter() {
            write!(checksum, "{b:02x}").unwrap();
        }

        let local_maps = found
            .iter()
            .map(|(t, _)| LocalMap::from_tableau(t))
            .collect();
        let (entries, words) = found.into_iter().unzip();
        TwoQubitCliffordTable {
            entries,
            words,
            local_maps,
            checksum,
        }
    }

    /// Process-wide table, built on first use.
    pub fn shared() -> &'static TwoQubitCliffordTable {
        static TABLE: OnceLock<TwoQubitCliffordTable> = OnceLock::new();
        TABLE.get_or_init(Self::enumerate)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CliffordTableau] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> &CliffordTableau {
        &self.entries[index]
    }

    /// Generator sequence (in time order) realizing entry `index`.
    pub fn word(&self, index: usize) -> &[Generator] {
        &self.words[index]
    }

    pub fn local_map(&self, index: usize) -> &LocalMap {
        &self.local_maps[index]
    }

    /// Hex SHA-256 of the canonical serialization (3 bytes per entry:
    /// big-endian image bits, then sign bits).
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// Uniform gate index.
    pub fn sample_gate_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.entries.len())
    }

    pub fn index_of(&self, tab: &CliffordTableau) -> Option<usize> {
        if tab.n != 2 {
            return None;
        }
        let key = tab.canonical_key();
        self.entries
            .binary_search_by_key(&key, |t| t.canonical_key())
            .ok()
    }

    /// Index of the inverse of entry `index`.
    pub fn inverse_index(&self, index: usize) -> usize {
        let g = &self.entries[index];
        let id = CliffordTableau::identity(2);
        (0..self.len())
            .find(|&h| g.followed_by(&self.entries[h]).expect("n=2") == id)
            .expect("group elements have inverses")
    }

    /// Conjugates `p` by entry `index` placed on qubits `(i, j)`.
    pub fn conjugate_local(&self, index: usize, i: usize, j: usize, p: &mut PauliString) {
        self.local_maps[index].apply(p, i, j);
    }
}
