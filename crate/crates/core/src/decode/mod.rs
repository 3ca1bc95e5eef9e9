//! Syndromes, logical classes and maximum-likelihood decoders.

mod analytic;
mod ewd;
mod exact;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use analytic::{analytic_pf_pure, analytic_pf_pure_success};
pub use ewd::{ewd_decode, ewd_decode_prepared, DecoderConfig, PSamplePreset};
pub use exact::{exact_mld_decode, exact_mld_decode_prepared, EXACT_QUBIT_CAP};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::{gf2_solve, BitMatrix, BitVec};
use crate::pauli::{Letter, PauliOperator};

/// One of the four cosets of the stabilizer group sharing a syndrome,
/// labelled by the logical operator separating it from the pure error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicalClass {
    I,
    X,
    Y,
    Z,
}

impl LogicalClass {
    pub const ALL: [LogicalClass; 4] = [LogicalClass::I, LogicalClass::X, LogicalClass::Y, LogicalClass::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> LogicalClass {
        Self::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            LogicalClass::I => "I",
            LogicalClass::X => "X",
            LogicalClass::Y => "Y",
            LogicalClass::Z => "Z",
        }
    }

    /// Representative logical operator of the class.
    pub fn operator(self, code: &StabilizerCode) -> PauliOperator {
        match self {
            LogicalClass::I => PauliOperator::identity(code.num_qubits()),
            LogicalClass::X => code.logical_x().clone(),
            LogicalClass::Y => code.logical_y(),
            LogicalClass::Z => code.logical_z().clone(),
        }
    }

    fn from_flags(flips_z: bool, flips_x: bool) -> LogicalClass {
        match (flips_z, flips_x) {
            (false, false) => LogicalClass::I,
            (true, false) => LogicalClass::X,
            (false, true) => LogicalClass::Z,
            (true, true) => LogicalClass::Y,
        }
    }
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" => Ok(LogicalClass::I),
            "X" => Ok(LogicalClass::X),
            "Y" => Ok(LogicalClass::Y),
            "Z" => Ok(LogicalClass::Z),
            other => Err(Error::Parse(format!("unknown logical class {other:?}"))),
        }
    }
}

/// One parity bit per generator, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub bits: BitVec,
}

impl Syndrome {
    pub fn zero(len: usize) -> Self {
        Self {
            bits: BitVec::zeros(len),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self {
            bits: BitVec::parse_bits(s)?,
        })
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

pub fn syndrome(code: &StabilizerCode, chain: &PauliOperator) -> Result<Syndrome> {
    if chain.num_qubits() != code.num_qubits() {
        return Err(Error::Parameter(format!(
            "chain acts on {} qubits, code has {}",
            chain.num_qubits(),
            code.num_qubits()
        )));
    }
    Ok(Syndrome {
        bits: code.syndrome_bits(chain)?,
    })
}

/// Class of `actual · recovery`, read off its commutation with the two
/// logicals.
pub fn logical_class(
    code: &StabilizerCode,
    actual: &PauliOperator,
    recovery: &PauliOperator,
) -> Result<LogicalClass> {
    if syndrome(code, actual)? != syndrome(code, recovery)? {
        return Err(Error::Precondition(
            "actual error and recovery have different syndromes".into(),
        ));
    }
    let residual = actual.mul(recovery)?;
    Ok(LogicalClass::from_flags(
        !residual.commutes(code.logical_z())?,
        !residual.commutes(code.logical_x())?,
    ))
}

/// Per-generator pure errors: `table[g]` has syndrome equal to the `g`-th
/// unit vector. The pure error of a syndrome is the XOR of the rows it selects.
#[derive(Clone, Debug)]
pub struct PureErrorTable {
    rows: Vec<PauliOperator>,
}

impl PureErrorTable {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let n = code.num_qubits();
        let m = code.num_generators();
        // Syndrome bit g of e = <g.z, e.x> + <g.x, e.z>, unknowns [e.x | e.z].
        let system = BitMatrix::from_rows(
            2 * n,
            code.generators()
                .iter()
                .map(|g| g.op.z_bits().concat(g.op.x_bits()))
                .collect(),
        )?;
        let rows = (0..m)
            .map(|g| {
                let mut unit = BitVec::zeros(m);
                unit.set(g, true);
                let x = gf2_solve(&system, &unit)?.ok_or_else(|| {
                    Error::Consistency(format!("syndrome bit {g} is not realizable by any chain"))
                })?;
                PauliOperator::from_symplectic(&x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn pure_error(&self, s: &Syndrome) -> Result<PauliOperator> {
        if s.len() != self.rows.len() {
            return Err(Error::Dimension {
                expected: self.rows.len(),
                found: s.len(),
            });
        }
        let n = self.rows.first().map_or(0, PauliOperator::num_qubits);
        let mut out = PauliOperator::identity(n);
        for g in s.bits.ones() {
            out.mul_assign(&self.rows[g])?;
        }
        Ok(out)
    }
}

/// Some chain with syndrome `s`, fixed for a given code and syndrome.
pub fn pure_error(code: &StabilizerCode, s: &Syndrome) -> Result<PauliOperator> {
    PureErrorTable::new(code)?.pure_error(s)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub proposals: u64,
    pub accepted: u64,
    /// Distinct chains scored per class, ordered I, X, Y, Z.
    pub unique_chains: [u64; 4],
    /// Classes whose distinct-chain store hit its cap.
    pub saturated: [bool; 4],
    /// Coset elements summed by exact enumeration.
    pub enumerated: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    /// Natural-log class scores ordered I, X, Y, Z; `-inf` for empty classes.
    pub class_scores: [f64; 4],
    pub chosen: LogicalClass,
    pub diagnostics: Diagnostics,
}

impl DecodeResult {
    pub(crate) fn from_scores(class_scores: [f64; 4], diagnostics: Diagnostics) -> Self {
        let mut best = 0;
        for c in 1..4 {
            if class_scores[c] > class_scores[best] {
                best = c;
            }
        }
        Self {
            class_scores,
            chosen: LogicalClass::from_index(best),
            diagnostics,
        }
    }

    /// Classes whose score equals the best one up to rounding.
    pub fn tied_classes(&self) -> Vec<LogicalClass> {
        let best = self.class_scores[self.chosen.index()];
        if best == f64::NEG_INFINITY {
            return LogicalClass::ALL.to_vec();
        }
        LogicalClass::ALL
            .into_iter()
            .filter(|c| {
                let s = self.class_scores[c.index()];
                (s - best).abs() <= 1e-9 * best.abs().max(1.0)
            })
            .collect()
    }

    /// `{"class_scores":[...],"chosen":"I","diagnostics":{...}}`; `-inf`
    /// scores are written as `null`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class_scores": self.class_scores.iter().map(|&s| {
                if s.is_finite() { serde_json::json!(s) } else { serde_json::Value::Null }
            }).collect::<Vec<_>>(),
            "chosen": self.chosen.name(),
            "diagnostics": self.diagnostics,
        })
    }
}

/// Precomputed per-code data shared by the decoders.
#[derive(Clone, Debug)]
pub struct PreparedCode {
    pub(crate) code: StabilizerCode,
    pub(crate) pure_errors: PureErrorTable,
    /// `(qubit, letter index)` per generator.
    pub(crate) supports: Vec<Vec<(usize, u8)>>,
    pub(crate) class_letters: [Vec<u8>; 4],
}

impl PreparedCode {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let supports = code
            .generator_supports()
            .into_iter()
            .map(|g| g.into_iter().map(|(q, l)| (q, l.index())).collect())
            .collect();
        let letters = |c: LogicalClass| c.operator(code).letters().into_iter().map(Letter::index).collect();
        Ok(Self {
            code: code.clone(),
            pure_errors: PureErrorTable::new(code)?,
            supports,
            class_letters: LogicalClass::ALL.map(letters),
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn pure_error(&self, s: &Syndrome) -> Result<PauliOperator> {
        self.pure_errors.pure_error(s)
    }

    /// Letter indices of `pure_error(s) · L_c`.
    pub(crate) fn class_start(&self, base: &[u8], class: LogicalClass) -> Vec<u8> {
        base.iter()
            .zip(&self.class_letters[class.index()])
            .map(|(a, b)| a ^ b)
            .collect()
    }

    pub(crate) fn check_syndrome(&self, s: &Syndrome) -> Result<()> {
        if s.len() != self.code.num_generators() {
            return Err(Error::Parameter(format!(
                "syndrome has {} bits, code has {} generators",
                s.len(),
                self.code.num_generators()
            )));
        }
        Ok(())
    }
}
