//! Phase-free Pauli operators in symplectic form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Single-qubit Pauli letter. The discriminant packs `x | z << 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Letter {
    I = 0,
    X = 1,
    Z = 2,
    Y = 3,
}

impl Letter {
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Letter {
        Letter::from_index(x as u8 | (z as u8) << 1)
    }

    #[inline]
    pub fn from_index(bits: u8) -> Letter {
        match bits & 3 {
            0 => Letter::I,
            1 => Letter::X,
            2 => Letter::Z,
            _ => Letter::Y,
        }
    }

    #[inline]
    pub fn index(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn has_x(self) -> bool {
        self.index() & 1 == 1
    }

    #[inline]
    pub fn has_z(self) -> bool {
        self.index() & 2 == 2
    }

    /// Phase-free product.
    #[inline]
    pub fn mul(self, other: Letter) -> Letter {
        Letter::from_index(self.index() ^ other.index())
    }

    #[inline]
    pub fn anticommutes(self, other: Letter) -> bool {
        let a = self.index();
        let b = other.index();
        ((a & 1) & (b >> 1) ^ (a >> 1) & (b & 1)) == 1
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c.to_ascii_uppercase() {
            'I' | '_' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next().and_then(Letter::from_char), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(Error::Parse(format!("not a Pauli letter: {s:?}"))),
        }
    }
}

/// An `n`-qubit Pauli string without phase: bit `q` of `x` is set iff qubit
/// `q` carries X or Y, bit `q` of `z` iff it carries Z or Y.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, letter);
        p
    }

    /// The same letter on every qubit in `support`.
    pub fn uniform(n: usize, support: impl IntoIterator<Item = usize>, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        for q in support {
            p.set(q, letter);
        }
        p
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, letter: Letter) {
        self.x.set(q, letter.has_x());
        self.z.set(q, letter.has_z());
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check_len(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Phase-free product (bitwise XOR of both halves).
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_len(other)?;
        Ok(PauliOperator {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        })
    }

    pub fn mul_assign(&mut self, other: &PauliOperator) -> Result<()> {
        self.check_len(other)?;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        Ok(())
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.x.and_parity(&other.z) == self.z.and_parity(&other.x))
    }

    /// Symplectic row `[x | z]`.
    pub fn to_symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn from_symplectic(v: &BitVec) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::Parse("symplectic vector has odd length".into()));
        }
        let n = v.len() / 2;
        Ok(Self {
            x: v.slice(0, n),
            z: v.slice(n, 2 * n),
        })
    }

    /// Swaps X and Z on the given qubits (Hadamard conjugation, phase-free).
    pub fn hadamard_on(&self, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut out = self.clone();
        for q in qubits {
            let l = self.letter(q);
            out.set(q, Letter::from_bits(l.has_z(), l.has_x()));
        }
        out
    }
}

pub fn pauli_mul(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    a.mul(b)
}

pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    a.commutes(b)
}

pub fn weight(a: &PauliOperator) -> usize {
    a.weight()
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Letter::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?} at position {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&letters))
    }
}
