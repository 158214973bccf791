//! Bit-packed n-qubit Pauli operators.
//!
//! A [`PauliString`] stores one x bit and one z bit per qubit, packed into
//! `u64` words, plus a phase exponent mod 4. The operator it denotes is
//! `i^phase · σ_0 ⊗ σ_1 ⊗ ... ⊗ σ_{n-1}`, where each letter is one of the
//! Pauli matrices selected by its bit pair:
//!
//! | (x, z) | letter |
//! |--------|--------|
//! | (0, 0) | I      |
//! | (1, 0) | X      |
//! | (1, 1) | Y      |
//! | (0, 1) | Z      |
//!
//! Qubit 0 is the leftmost letter of the text form and the lowest bit of the
//! first word. Hermitian operators are exactly those with phase 0 or 2.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) const WORD: usize = 64;

pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = word_count(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// A single letter on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(q, letter);
        p
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// Builds from raw words. Bits above `n` must be clear.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        assert_eq!(x.len(), word_count(n));
        assert_eq!(z.len(), word_count(n));
        PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        }
    }

    /// Uniformly random letters with sign +1.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(n);
        for (wi, (xw, zw)) in p.x.iter_mut().zip(p.z.iter_mut()).enumerate() {
            let mask = word_mask(n, wi);
            *xw = rng.random::<u64>() & mask;
            *zw = rng.random::<u64>() & mask;
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Exponent `e` in `i^e`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// `true` for sign −1. Only meaningful for Hermitian operators.
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = letter.bits();
        let bit = 1u64 << (q % WORD);
        let w = q / WORD;
        if xb {
            self.x[w] |= bit;
        } else {
            self.x[w] &= !bit;
        }
        if zb {
            self.z[w] |= bit;
        } else {
            self.z[w] &= !bit;
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(move |q| self.letter(q))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        check_dims(self.n, other.n)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`. Panics on mismatched sizes.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n);
        // Rewrite both factors as i^e ∏ X^x Z^z (Y = i·XZ), multiply, and
        // rewrite back. Moving Z^z1 past X^x2 costs (-1)^{z1·x2}.
        let mut e = self.phase as u32 + other.phase as u32 + self.y_count() + other.y_count();
        let mut cross = 0u32;
        for ((xa, za), (xb, zb)) in self
            .x
            .iter_mut()
            .zip(self.z.iter_mut())
            .zip(other.x.iter().zip(&other.z))
        {
            cross += (*za & xb).count_ones();
            *xa ^= xb;
            *za ^= zb;
        }
        e += 2 * cross + 4 - self.y_count() % 4;
        self.phase = (e % 4) as u8;
    }

    /// 1 if the operators anticommute, 0 if they commute.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<u8> {
        check_dims(self.n, other.n)?;
        Ok(self.anticommutes_unchecked(other) as u8)
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc += ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        acc & 1 == 1
    }

    /// Letters only, without sign.
    pub fn letters_string(&self) -> String {
        self.letters().map(Letter::as_char).collect()
    }

    /// Parses letters over `{I,X,Y,Z}` with an explicit sign.
    pub fn parse_with_sign(text: &str, negative: bool) -> Result<Self> {
        let mut p: PauliString = text.parse()?;
        if negative {
            p.phase = (p.phase + 2) % 4;
        }
        Ok(p)
    }

    pub(crate) fn x_words_mut(&mut self) -> &mut [u64] {
        &mut self.x
    }

    pub(crate) fn z_words_mut(&mut self) -> &mut [u64] {
        &mut self.z
    }
}

pub(crate) fn word_mask(n: usize, word_index: usize) -> u64 {
    let rem = n - word_index * WORD;
    if rem >= WORD {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::Dimension { left, right });
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letters_string())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts `[+|-|+i|-i]?[IXYZ]+`.
    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (phase, body) = if let Some(rest) = text.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = text.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = text.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = text.strip_prefix('-') {
            (2, rest)
        } else {
            (0, text)
        };
        if body.is_empty() {
            return Err(err("empty letter string"));
        }
        let letters = body
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| err(&format!("invalid letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut p = PauliString::from_letters(&letters);
        p.phase = phase;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
