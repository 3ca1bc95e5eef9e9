use std::collections::BTreeMap;

use serde::Serialize;

use super::{min_weight_logical, Family, GeneratorKind, Point, StabilizerCode};
use crate::error::Error;
use crate::pauli::{Letter, PauliOperator};

/// Outcome of every algebraic check on a code. Failures are recorded, never
/// raised.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub num_qubits: usize,
    pub num_generators: usize,
    pub commutation_ok: bool,
    /// First anticommuting generator pair, if any.
    pub anticommuting_pair: Option<(usize, usize)>,
    pub rank: usize,
    pub rank_ok: bool,
    pub single_error_detection_ok: bool,
    pub undetected_errors: Vec<(usize, Letter)>,
    pub logical_ok: bool,
    pub distance_unrestricted: Option<usize>,
    pub distance_pure: BTreeMap<Letter, usize>,
    /// Unit direction of the plaquette-defect pair per error letter (XYZ² only).
    pub syndrome_directions: BTreeMap<Letter, Point>,
    pub directionality_ok: Option<bool>,
    /// Why an optional check was skipped or failed.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.commutation_ok
            && self.rank_ok
            && self.single_error_detection_ok
            && self.logical_ok
            && self.directionality_ok.unwrap_or(true)
    }
}

/// Runs the commutation, rank, detection and logical checks, the
/// XYZ² defect-direction check, and optionally exhaustive distance searches.
pub fn validate_code(code: &StabilizerCode, compute_distances: bool) -> ValidationReport {
    let n = code.num_qubits();
    let gens = code.generators();
    let mut notes = Vec::new();

    let mut anticommuting_pair = None;
    'outer: for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !gens[a].op.commutes(&gens[b].op).expect("same length") {
                anticommuting_pair = Some((a, b));
                break 'outer;
            }
        }
    }

    let matrix = code.symplectic_matrix();
    let rank = matrix.rank();
    let rank_ok = n > 0 && rank == n - 1;

    let mut undetected_errors = Vec::new();
    for q in 0..n {
        for letter in Letter::NON_IDENTITY {
            let e = PauliOperator::single(n, q, letter);
            if code.syndrome_bits(&e).expect("same length").is_zero() {
                undetected_errors.push((q, letter));
            }
        }
    }

    let lx = code.logical_x();
    let lz = code.logical_z();
    let commutes_all = |op: &PauliOperator| gens.iter().all(|g| g.op.commutes(op).expect("same length"));
    let outside_group = |op: &PauliOperator| !matrix.row_space_contains(&op.to_symplectic());
    let logical_ok = commutes_all(lx)
        && commutes_all(lz)
        && !lx.commutes(lz).expect("same length")
        && outside_group(lx)
        && outside_group(lz);

    let mut distance_unrestricted = None;
    let mut distance_pure = BTreeMap::new();
    if compute_distances {
        match min_weight_logical(code, None) {
            Ok(Some(m)) => distance_unrestricted = Some(m.weight),
            Ok(None) => notes.push("no nontrivial logical found".into()),
            Err(e) => notes.push(format!("unrestricted distance skipped: {e}")),
        }
        for letter in Letter::NON_IDENTITY {
            match min_weight_logical(code, Some(letter)) {
                Ok(Some(m)) => {
                    distance_pure.insert(letter, m.weight);
                }
                Ok(None) => notes.push(format!("no pure-{letter} logical exists")),
                Err(Error::Capability(msg)) => {
                    notes.push(format!("pure-{letter} distance skipped: {msg}"))
                }
                Err(e) => notes.push(format!("pure-{letter} distance failed: {e}")),
            }
        }
    }

    let (syndrome_directions, directionality_ok) = if code.family() == Family::Xyz2 {
        let (dirs, ok, note) = check_directionality(code);
        if let Some(note) = note {
            notes.push(note);
        }
        (dirs, Some(ok))
    } else {
        (BTreeMap::new(), None)
    };

    ValidationReport {
        num_qubits: n,
        num_generators: gens.len(),
        commutation_ok: anticommuting_pair.is_none(),
        anticommuting_pair,
        rank,
        rank_ok,
        single_error_detection_ok: undetected_errors.is_empty(),
        undetected_errors,
        logical_ok,
        distance_unrestricted,
        distance_pure,
        syndrome_directions,
        directionality_ok,
        notes,
    }
}

fn unit_direction(a: Point, b: Point) -> Point {
    let (mut dx, mut dy) = (b.0 - a.0, b.1 - a.1);
    if dx < -1e-12 || (dx.abs() <= 1e-12 && dy < 0.0) {
        dx = -dx;
        dy = -dy;
    }
    let norm = dx.hypot(dy);
    (dx / norm, dy / norm)
}

fn parallel(a: Point, b: Point) -> bool {
    (a.0 * b.1 - a.1 * b.0).abs() < 1e-9
}

/// Bulk qubits lie in three full hexagons and no boundary half. An isolated
/// X must flag exactly two hexagons and no link; Z and Y flag two hexagons
/// and their own link. Each letter's hexagon pair must point the same way at
/// every bulk qubit, and the three letters must point three different ways.
fn check_directionality(code: &StabilizerCode) -> (BTreeMap<Letter, Point>, bool, Option<String>) {
    let n = code.num_qubits();
    let gens = code.generators();
    let mut membership = vec![(0usize, 0usize); n];
    for g in gens {
        for q in g.op.support() {
            match g.kind {
                GeneratorKind::Plaquette => membership[q].0 += 1,
                GeneratorKind::HalfPlaquette => membership[q].1 += 1,
                _ => {}
            }
        }
    }
    let bulk: Vec<usize> = (0..n).filter(|&q| membership[q] == (3, 0)).collect();
    if bulk.is_empty() {
        return (BTreeMap::new(), false, Some("no bulk qubits".into()));
    }
    let mut dirs: BTreeMap<Letter, Point> = BTreeMap::new();
    for &q in &bulk {
        for letter in Letter::NON_IDENTITY {
            let e = PauliOperator::single(n, q, letter);
            let flagged: Vec<usize> = code.syndrome_bits(&e).expect("same length").ones().collect();
            let plaquettes: Vec<usize> = flagged
                .iter()
                .copied()
                .filter(|&g| gens[g].kind == GeneratorKind::Plaquette)
                .collect();
            let links = flagged
                .iter()
                .filter(|&&g| gens[g].kind == GeneratorKind::Link)
                .count();
            let expected_links = usize::from(letter != Letter::X);
            if plaquettes.len() != 2 || links != expected_links || flagged.len() != 2 + expected_links {
                return (
                    dirs,
                    false,
                    Some(format!(
                        "{letter} on bulk qubit {q} flags {} plaquettes and {links} links",
                        plaquettes.len()
                    )),
                );
            }
            let (Some(a), Some(b)) = (gens[plaquettes[0]].center, gens[plaquettes[1]].center) else {
                return (dirs, false, Some("plaquette without a center".into()));
            };
            let dir = unit_direction(a, b);
            match dirs.get(&letter) {
                Some(&prev) if !parallel(prev, dir) => {
                    return (
                        dirs,
                        false,
                        Some(format!("{letter} defect direction varies at qubit {q}")),
                    )
                }
                Some(_) => {}
                None => {
                    dirs.insert(letter, dir);
                }
            }
        }
    }
    let v: Vec<Point> = dirs.values().copied().collect();
    let distinct = !parallel(v[0], v[1]) && !parallel(v[0], v[2]) && !parallel(v[1], v[2]);
    let note = (!distinct).then(|| "defect directions are not pairwise distinct".to_string());
    (dirs, distinct, note)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_rotated_surface, build_xyz2, build_xzzx, Generator};

    #[test]
    fn builders_validate() {
        for d in [3, 5, 7] {
            for code in [
                build_xyz2(d).unwrap(),
                build_xzzx(d).unwrap(),
                build_rotated_surface(d).unwrap(),
            ] {
                let r = validate_code(&code, false);
                assert!(r.all_ok(), "{} d={d}: {r:?}", code.family());
                assert_eq!(r.rank, code.num_qubits() - 1);
            }
        }
    }

    #[test]
    fn xyz2_directions_are_three_way() {
        let r = validate_code(&build_xyz2(5).unwrap(), false);
        assert_eq!(r.directionality_ok, Some(true));
        assert_eq!(r.syndrome_directions.len(), 3);
        // X pairs lie along the link rows.
        let x = r.syndrome_directions[&Letter::X];
        assert!(x.1.abs() < 1e-12 && (x.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corrupted_generator_is_reported() {
        let code = build_xyz2(3).unwrap();
        let mut gens: Vec<Generator> = code.generators().to_vec();
        // Flip the first letter of the first plaquette from its value to another.
        let q = gens[0].op.support()[0];
        let l = gens[0].op.letter(q);
        let replacement = if l == Letter::X { Letter::Z } else { Letter::X };
        gens[0].op.set(q, replacement);
        let mut bad = code.clone();
        bad.replace_generators(gens);
        let r = validate_code(&bad, false);
        assert!(!r.commutation_ok);
        let (a, _) = r.anticommuting_pair.unwrap();
        assert_eq!(a, 0);
        assert!(!r.all_ok());
    }
}
