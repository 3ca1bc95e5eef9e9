//! Single-qubit rotations and the qubit-doubling map between code families.

use super::build::{honeycomb_positions, link_center};
use super::{Family, Generator, GeneratorKind, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};

/// Exchanges X and Z on `qubits` in every generator and logical.
pub fn hadamard_transform(code: &StabilizerCode, qubits: &[usize]) -> Result<StabilizerCode> {
    let n = code.num_qubits();
    if let Some(&bad) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::Parameter(format!(
            "qubit {bad} out of range for a {n}-qubit code"
        )));
    }
    let map = |op: &PauliOperator| op.hadamard_on(qubits.iter().copied());
    let mut out = code.clone();
    out.replace_generators(
        code.generators()
            .iter()
            .map(|g| Generator {
                op: map(&g.op),
                ..g.clone()
            })
            .collect(),
    );
    let (x, z) = (map(code.logical_x()), map(code.logical_z()));
    let mut out = out.with_logicals(x, z);
    if code.family() == Family::RotatedSurface && is_odd_checkerboard(code, qubits) {
        out.family = Family::Xzzx;
    } else if code.family() == Family::Xzzx && is_odd_checkerboard(code, qubits) {
        out.family = Family::RotatedSurface;
    }
    Ok(out)
}

/// Square-lattice sites `(i, j)` with `i + j` odd.
pub fn odd_checkerboard(d: usize) -> Vec<usize> {
    (0..d * d).filter(|s| (s / d + s % d) % 2 == 1).collect()
}

fn is_odd_checkerboard(code: &StabilizerCode, qubits: &[usize]) -> bool {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted == odd_checkerboard(code.distance_parameter())
}

/// Applies the same letter permutation on every qubit. `image` gives the
/// images of X, Y and Z in that order and must itself be a permutation of
/// them for commutation relations to survive.
pub fn relabel_letters(code: &StabilizerCode, image: [Letter; 3]) -> Result<StabilizerCode> {
    let mut sorted = image;
    sorted.sort();
    let mut expected = Letter::NON_IDENTITY;
    expected.sort();
    if sorted != expected {
        return Err(Error::Parameter(format!(
            "relabeling must permute X, Y, Z; got {image:?}"
        )));
    }
    let map_letter = |l: Letter| match l {
        Letter::I => Letter::I,
        Letter::X => image[0],
        Letter::Y => image[1],
        Letter::Z => image[2],
    };
    let map = |op: &PauliOperator| {
        PauliOperator::from_letters(&op.letters().into_iter().map(map_letter).collect::<Vec<_>>())
    };
    let out = code.clone();
    let mut out = out.with_logicals(map(code.logical_x()), map(code.logical_z()));
    out.replace_generators(
        code.generators()
            .iter()
            .map(|g| Generator {
                op: map(&g.op),
                ..g.clone()
            })
            .collect(),
    );
    Ok(out)
}

/// XZZX → YZZY by exchanging X and Y on every qubit.
pub fn to_yzzy(code: &StabilizerCode) -> Result<StabilizerCode> {
    if code.family() != Family::Xzzx {
        return Err(Error::Parameter(format!(
            "YZZY relabeling expects an xzzx code, got {}",
            code.family()
        )));
    }
    let mut out = relabel_letters(code, [Letter::Y, Letter::X, Letter::Z])?;
    out.family = Family::Yzzy;
    Ok(out)
}

/// Basis of the two-qubit link stabilizer introduced by [`double_qubits`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkBasis {
    /// `|0⟩ → |++⟩`, `|1⟩ → |--⟩`, links XX.
    X,
    /// `|0⟩ → |00⟩`, `|1⟩ → |11⟩`, links ZZ.
    Z,
}

impl LinkBasis {
    /// Image of a single-qubit letter on the pair `(bottom, top)`, taking the
    /// first of the two link-equivalent choices.
    pub fn image(self, letter: Letter) -> (Letter, Letter) {
        use Letter::*;
        match (self, letter) {
            (_, I) => (I, I),
            (LinkBasis::X, X) => (Z, Z),
            (LinkBasis::X, Y) => (Y, Z),
            (LinkBasis::X, Z) => (X, I),
            (LinkBasis::Z, X) => (X, X),
            (LinkBasis::Z, Y) => (Y, X),
            (LinkBasis::Z, Z) => (Z, I),
        }
    }

    fn link_letter(self) -> Letter {
        match self {
            LinkBasis::X => Letter::X,
            LinkBasis::Z => Letter::Z,
        }
    }
}

/// Maps an operator on the square lattice to the doubled lattice; qubit `q`
/// becomes the pair `(2q, 2q+1)`.
pub fn double_operator(op: &PauliOperator, basis: LinkBasis) -> PauliOperator {
    let mut out = PauliOperator::identity(2 * op.num_qubits());
    for q in op.support() {
        let (b, t) = basis.image(op.letter(q));
        out.set(2 * q, b);
        out.set(2 * q + 1, t);
    }
    out
}

/// Replaces every qubit of a YZZY code by a link-stabilized pair.
///
/// The square faces become honeycomb hexagons (boundary faces become
/// half-hexagons) and one link generator is appended per original qubit.
/// The logical labels are exchanged so that, for the X link basis, the
/// output's `logical_x` is the pure-X row as in [`super::build_xyz2`].
pub fn double_qubits(code: &StabilizerCode, basis: LinkBasis) -> Result<StabilizerCode> {
    if code.family() != Family::Yzzy {
        return Err(Error::Parameter(format!(
            "qubit doubling expects a yzzy code, got {}",
            code.family()
        )));
    }
    for g in code.generators() {
        if g.op.letters().iter().any(|&l| l == Letter::X) {
            return Err(Error::Parameter(
                "qubit doubling expects YZZY faces without X letters".into(),
            ));
        }
    }
    let d = code.distance_parameter();
    let n = code.num_qubits();
    let mut generators: Vec<Generator> = code
        .generators()
        .iter()
        .map(|g| Generator {
            kind: match g.kind {
                GeneratorKind::BoundaryPair => GeneratorKind::HalfPlaquette,
                _ => GeneratorKind::Plaquette,
            },
            op: double_operator(&g.op, basis),
            center: None,
        })
        .collect();
    generators.extend((0..n).map(|q| Generator {
        kind: GeneratorKind::Link,
        op: PauliOperator::uniform(2 * n, [2 * q, 2 * q + 1], basis.link_letter()),
        center: Some(link_center(d, q)),
    }));
    let positions = honeycomb_positions(d);
    for g in generators.iter_mut().filter(|g| g.center.is_none()) {
        let support = g.op.support();
        // Half-hexagon centroids are off-center but still mark the face.
        let (sx, sy) = support
            .iter()
            .fold((0.0, 0.0), |(x, y), &q| (x + positions[q].0, y + positions[q].1));
        let k = support.len() as f64;
        g.center = Some((sx / k, sy / k));
    }
    let family = match basis {
        LinkBasis::X => Family::Xyz2,
        LinkBasis::Z => Family::Xyz2Zz,
    };
    StabilizerCode::new(
        family,
        d,
        generators,
        double_operator(code.logical_z(), basis),
        double_operator(code.logical_x(), basis),
        positions,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_rotated_surface, build_xyz2, build_xzzx, validate_code};

    #[test]
    fn empty_hadamard_is_identity() {
        let code = build_rotated_surface(3).unwrap();
        let out = hadamard_transform(&code, &[]).unwrap();
        assert_eq!(out, code);
    }

    #[test]
    fn hadamard_is_involution() {
        let code = build_xyz2(3).unwrap();
        let qubits = [0, 3, 7, 11];
        let once = hadamard_transform(&code, &qubits).unwrap();
        assert_ne!(once, code);
        assert_eq!(hadamard_transform(&once, &qubits).unwrap(), code);
    }

    #[test]
    fn hadamard_rejects_out_of_range() {
        let code = build_xzzx(3).unwrap();
        assert!(matches!(
            hadamard_transform(&code, &[9]),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn checkerboard_hadamard_gives_xzzx() {
        for d in [3, 5] {
            let surface = build_rotated_surface(d).unwrap();
            let out = hadamard_transform(&surface, &odd_checkerboard(d)).unwrap();
            let xzzx = build_xzzx(d).unwrap();
            assert_eq!(out.family(), Family::Xzzx);
            for (a, b) in out.generators().iter().zip(xzzx.generators()) {
                assert_eq!(a.op, b.op);
            }
            assert!(validate_code(&out, false).all_ok());
        }
    }

    #[test]
    fn doubling_single_face() {
        // One YZZY face on sites (Left, Top, Bottom, Right) = (0, 1, 2, 3).
        let face: PauliOperator = "YZZY".parse().unwrap();
        let doubled = double_operator(&face, LinkBasis::X);
        assert_eq!(doubled.to_string(), "YZXIXIYZ");
        // Multiply by the Bottom and Right links to get the XYZXYZ reading
        // used by the honeycomb builder.
        let mut hex = doubled.clone();
        hex.mul_assign(&"IIIIXXII".parse().unwrap()).unwrap();
        hex.mul_assign(&"IIIIIIXX".parse().unwrap()).unwrap();
        assert_eq!(hex.weight(), 6);
        assert_eq!(hex.to_string(), "YZXIIXZY");
    }

    #[test]
    fn doubling_maps_all_x_to_all_z() {
        let all_x = PauliOperator::uniform(9, 0..9, Letter::X);
        let out = double_operator(&all_x, LinkBasis::X);
        assert_eq!(out, PauliOperator::uniform(18, 0..18, Letter::Z));
    }

    #[test]
    fn doubling_rejects_wrong_family() {
        let code = build_xzzx(3).unwrap();
        assert!(matches!(
            double_qubits(&code, LinkBasis::X),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn z_basis_doubling_is_a_valid_code() {
        let yzzy = to_yzzy(&build_xzzx(3).unwrap()).unwrap();
        let out = double_qubits(&yzzy, LinkBasis::Z).unwrap();
        assert_eq!(out.count_kind(GeneratorKind::Link), 9);
        assert!(validate_code(&out, false).all_ok());
    }
}
