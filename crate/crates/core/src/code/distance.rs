//! Exhaustive minimum-weight logical search for small codes.

use serde::Serialize;

use super::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::Letter;

/// Largest enumerated space dimension: `2^24` elements per coset (or per
/// pure-letter solution space).
pub const SEARCH_DIMENSION_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinWeightLogical {
    pub weight: usize,
    /// Number of distinct operators attaining `weight`.
    pub count: u64,
}

/// Minimum weight over nontrivial logical operators, optionally restricted
/// to a single Pauli letter. Returns `None` when no such logical exists.
///
/// Unrestricted search walks each of the three nontrivial cosets `L·S` in
/// Gray-code order; restricted search enumerates the solution space of the
/// commutation constraints for the chosen letter.
pub fn min_weight_logical(
    code: &StabilizerCode,
    restriction: Option<Letter>,
) -> Result<Option<MinWeightLogical>> {
    match restriction {
        None => unrestricted(code),
        Some(Letter::I) => Err(Error::Parameter("restriction letter must be X, Y or Z".into())),
        Some(letter) => pure(code, letter),
    }
}

fn record(best: &mut Option<MinWeightLogical>, weight: usize) {
    match best {
        Some(b) if weight > b.weight => {}
        Some(b) if weight == b.weight => b.count += 1,
        _ => *best = Some(MinWeightLogical { weight, count: 1 }),
    }
}

fn unrestricted(code: &StabilizerCode) -> Result<Option<MinWeightLogical>> {
    let m = code.num_generators();
    if m > SEARCH_DIMENSION_CAP {
        return Err(Error::Capability(format!(
            "unrestricted search needs 2^{m} elements per coset; the cap is 2^{SEARCH_DIMENSION_CAP}"
        )));
    }
    let rank = code.symplectic_matrix().rank();
    if rank != m {
        return Err(Error::Consistency(format!(
            "generators are dependent (rank {rank} of {m}); coset enumeration would repeat elements"
        )));
    }
    let supports = code.generator_supports();
    let mut best = None;
    for start in [code.logical_x().clone(), code.logical_z().clone(), code.logical_y()] {
        let mut letters: Vec<u8> = start.letters().into_iter().map(Letter::index).collect();
        let mut weight = start.weight();
        record(&mut best, weight);
        for step in 1u64..(1u64 << m) {
            let g = step.trailing_zeros() as usize;
            for &(q, l) in &supports[g] {
                let before = letters[q];
                let after = before ^ l.index();
                letters[q] = after;
                weight = weight + usize::from(after != 0) - usize::from(before != 0);
            }
            record(&mut best, weight);
        }
    }
    Ok(best)
}

fn pure(code: &StabilizerCode, letter: Letter) -> Result<Option<MinWeightLogical>> {
    let n = code.num_qubits();
    let anti_row = |op: &crate::pauli::PauliOperator| {
        BitVec::from_bools((0..n).map(|q| op.letter(q).anticommutes(letter)))
    };
    let constraints = BitMatrix::from_rows(
        n,
        code.generators().iter().map(|g| anti_row(&g.op)).collect(),
    )?;
    let basis = constraints.nullspace();
    let k = basis.len();
    if k > SEARCH_DIMENSION_CAP {
        return Err(Error::Capability(format!(
            "pure-{letter} solution space has dimension {k}; the cap is {SEARCH_DIMENSION_CAP}"
        )));
    }
    // A commuting operator is trivial iff it also commutes with both logicals.
    let lx = anti_row(code.logical_x());
    let lz = anti_row(code.logical_z());
    let mut best = None;
    let mut v = BitVec::zeros(n);
    for step in 1u64..(1u64 << k) {
        v.xor_assign(&basis[step.trailing_zeros() as usize]);
        if v.and_parity(&lx) || v.and_parity(&lz) {
            record(&mut best, v.count_ones());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_rotated_surface, build_xyz2, build_xzzx};

    #[test]
    fn xyz2_d3_pure_x() {
        let m = min_weight_logical(&build_xyz2(3).unwrap(), Some(Letter::X)).unwrap().unwrap();
        assert_eq!((m.weight, m.count), (3, 8));
    }

    #[test]
    fn xyz2_d3_pure_z_and_y() {
        let code = build_xyz2(3).unwrap();
        for l in [Letter::Z, Letter::Y] {
            let m = min_weight_logical(&code, Some(l)).unwrap().unwrap();
            assert_eq!((m.weight, m.count), (18, 1), "{l}");
        }
    }

    #[test]
    fn xzzx_and_surface_d3() {
        let xzzx = build_xzzx(3).unwrap();
        assert_eq!(min_weight_logical(&xzzx, Some(Letter::Z)).unwrap().unwrap().weight, 3);
        assert_eq!(min_weight_logical(&xzzx, Some(Letter::X)).unwrap().unwrap().weight, 3);
        assert_eq!(min_weight_logical(&xzzx, Some(Letter::Y)).unwrap().unwrap().weight, 9);
        let surface = build_rotated_surface(3).unwrap();
        assert_eq!(min_weight_logical(&surface, None).unwrap().unwrap().weight, 3);
        assert_eq!(min_weight_logical(&surface, Some(Letter::Y)).unwrap().unwrap().weight, 9);
    }

    #[test]
    fn large_searches_hit_the_cap() {
        let code = build_xyz2(5).unwrap();
        assert!(matches!(min_weight_logical(&code, None), Err(Error::Capability(_))));
        assert!(matches!(
            min_weight_logical(&code, Some(Letter::X)),
            Err(Error::Capability(_))
        ));
        let z = min_weight_logical(&code, Some(Letter::Z)).unwrap().unwrap();
        assert_eq!((z.weight, z.count), (50, 1));
    }
}
