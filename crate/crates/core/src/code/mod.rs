//! Stabilizer codes on the honeycomb (XYZ²) and square (XZZX, rotated
//! surface) lattices, plus the maps between them.

mod build;
mod distance;
mod format;
mod transform;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use build::{build_rotated_surface, build_xyz2, build_xzzx};
pub use distance::{min_weight_logical, MinWeightLogical, SEARCH_DIMENSION_CAP};
pub use transform::{double_qubits, hadamard_transform, odd_checkerboard, relabel_letters, to_yzzy, LinkBasis};
pub use validate::{validate_code, ValidationReport};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Xyz2,
    Xzzx,
    RotatedSurface,
    /// XZZX with X and Y exchanged on every qubit; input to [`double_qubits`].
    Yzzy,
    /// Honeycomb code with ZZ links, from doubling in the Z link basis.
    Xyz2Zz,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Xyz2 => "xyz2",
            Family::Xzzx => "xzzx",
            Family::RotatedSurface => "rotated_surface",
            Family::Yzzy => "yzzy",
            Family::Xyz2Zz => "xyz2_zz",
        }
    }

    pub fn is_square_lattice(self) -> bool {
        matches!(self, Family::Xzzx | Family::RotatedSurface | Family::Yzzy)
    }

    /// Builds the code of this family at distance `d`.
    pub fn build(self, d: usize) -> Result<StabilizerCode> {
        match self {
            Family::Xyz2 => build_xyz2(d),
            Family::Xzzx => build_xzzx(d),
            Family::RotatedSurface => build_rotated_surface(d),
            Family::Yzzy => Ok(to_yzzy(&build_xzzx(d)?)?),
            Family::Xyz2Zz => double_qubits(&to_yzzy(&build_xzzx(d)?)?, LinkBasis::Z),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xyz2" => Ok(Family::Xyz2),
            "xzzx" => Ok(Family::Xzzx),
            "rotated_surface" | "surface" => Ok(Family::RotatedSurface),
            "yzzy" => Ok(Family::Yzzy),
            "xyz2_zz" => Ok(Family::Xyz2Zz),
            other => Err(Error::Parameter(format!("unknown code family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Weight-6 hexagon.
    Plaquette,
    /// Weight-2 vertical link.
    Link,
    /// Weight-3 boundary hexagon half.
    HalfPlaquette,
    /// Weight-4 square face.
    SquarePlaquette,
    /// Weight-2 square-lattice boundary face.
    BoundaryPair,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Plaquette => "plaquette",
            GeneratorKind::Link => "link",
            GeneratorKind::HalfPlaquette => "half_plaquette",
            GeneratorKind::SquarePlaquette => "square_plaquette",
            GeneratorKind::BoundaryPair => "boundary_pair",
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plaquette" => GeneratorKind::Plaquette,
            "link" => GeneratorKind::Link,
            "half_plaquette" => GeneratorKind::HalfPlaquette,
            "square_plaquette" => GeneratorKind::SquarePlaquette,
            "boundary_pair" => GeneratorKind::BoundaryPair,
            other => return Err(Error::Parse(format!("unknown generator kind {other:?}"))),
        })
    }
}

/// A 2D lattice position in arbitrary units.
pub type Point = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub op: PauliOperator,
    /// Face center for plaquette-like generators.
    pub center: Option<Point>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    family: Family,
    distance: usize,
    generators: Vec<Generator>,
    logical_x: PauliOperator,
    logical_z: PauliOperator,
    positions: Vec<Point>,
}

impl StabilizerCode {
    /// Assembles a code after checking that every operator acts on
    /// `positions.len()` qubits. Algebraic validity is checked separately by
    /// [`validate_code`].
    pub fn new(
        family: Family,
        distance: usize,
        generators: Vec<Generator>,
        logical_x: PauliOperator,
        logical_z: PauliOperator,
        positions: Vec<Point>,
    ) -> Result<Self> {
        let n = positions.len();
        for op in generators
            .iter()
            .map(|g| &g.op)
            .chain([&logical_x, &logical_z])
        {
            if op.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: op.num_qubits(),
                });
            }
        }
        Ok(Self {
            family,
            distance,
            generators,
            logical_x,
            logical_z,
            positions,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn distance_parameter(&self) -> usize {
        self.distance
    }

    pub fn num_qubits(&self) -> usize {
        self.positions.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> &PauliOperator {
        &self.generators[g].op
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logical_z
    }

    /// `X_L · Z_L`, the phase-free logical Y.
    pub fn logical_y(&self) -> PauliOperator {
        self.logical_x
            .mul(&self.logical_z)
            .expect("logicals share the code's qubit count")
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn count_kind(&self, kind: GeneratorKind) -> usize {
        self.generators.iter().filter(|g| g.kind == kind).count()
    }

    /// Generators as rows `[x | z]` of a `m × 2n` matrix.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(
            2 * self.num_qubits(),
            self.generators.iter().map(|g| g.op.to_symplectic()).collect(),
        )
        .expect("generator rows have 2n columns")
    }

    /// True iff `op` is (up to phase) an element of the stabilizer group.
    pub fn in_stabilizer_group(&self, op: &PauliOperator) -> Result<bool> {
        if op.num_qubits() != self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: op.num_qubits(),
            });
        }
        Ok(self.symplectic_matrix().row_space_contains(&op.to_symplectic()))
    }

    /// Syndrome bit per generator: set iff the generator anticommutes with `op`.
    pub fn syndrome_bits(&self, op: &PauliOperator) -> Result<BitVec> {
        if op.num_qubits() != self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: op.num_qubits(),
            });
        }
        Ok(BitVec::from_bools(
            self.generators
                .iter()
                .map(|g| !g.op.commutes(op).expect("checked length")),
        ))
    }

    pub(crate) fn replace_generators(&mut self, generators: Vec<Generator>) {
        self.generators = generators;
    }

    pub(crate) fn with_logicals(mut self, x: PauliOperator, z: PauliOperator) -> Self {
        self.logical_x = x;
        self.logical_z = z;
        self
    }

    /// Letters of every generator, indexed `[g][q]`, for hot loops.
    pub fn generator_supports(&self) -> Vec<Vec<(usize, Letter)>> {
        self.generators
            .iter()
            .map(|g| g.op.support().into_iter().map(|q| (q, g.op.letter(q))).collect())
            .collect()
    }
}

pub(crate) fn check_distance(d: usize) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Parameter(format!(
            "code distance must be odd and at least 3, got {d}"
        )));
    }
    Ok(())
}
