//! Lattice builders.
//!
//! All three families share one square grid of `d × d` sites `(i, j)`, row
//! `i` growing downward. A face `(i, j)` with `-1 ≤ i, j ≤ d-1` has corners
//! `(i,j)`, `(i,j+1)`, `(i+1,j)`, `(i+1,j+1)`; corners `(i,j)` and
//! `(i+1,j+1)` form its main diagonal. Interior faces are always present;
//! boundary faces alternate: top row for even `j`, bottom row for odd `j`,
//! left column for odd `i`, right column for even `i`.
//!
//! On the honeycomb every site becomes a vertical link with a bottom (`t=0`)
//! and a top (`t=1`) qubit, qubit id `2(i·d + j) + t`. Face `(i,j)` becomes
//! the hexagon whose left and right links are its main-diagonal sites and
//! whose top-middle and bottom-middle vertices are the nearer qubits of the
//! two anti-diagonal sites.

use super::{check_distance, Family, Generator, GeneratorKind, Point, StabilizerCode};
use crate::error::Result;
use crate::pauli::{Letter, PauliOperator};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Face {
    pub i: isize,
    pub j: isize,
    pub boundary: bool,
}

/// Corner role within a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Corner {
    /// `(i, j)`: main diagonal, left of the hexagon.
    Left,
    /// `(i, j+1)`: anti-diagonal, top of the hexagon.
    Top,
    /// `(i+1, j)`: anti-diagonal, bottom of the hexagon.
    Bottom,
    /// `(i+1, j+1)`: main diagonal, right of the hexagon.
    Right,
}

impl Corner {
    pub fn on_main_diagonal(self) -> bool {
        matches!(self, Corner::Left | Corner::Right)
    }
}

/// Faces in row-major order.
pub(crate) fn faces(d: usize) -> Vec<Face> {
    let last = d as isize - 1;
    let mut out = Vec::new();
    for i in -1..=last {
        for j in -1..=last {
            let row_edge = i == -1 || i == last;
            let col_edge = j == -1 || j == last;
            let keep = match (row_edge, col_edge) {
                (false, false) => true,
                (true, true) => false,
                (true, false) => {
                    if i == -1 {
                        j % 2 == 0
                    } else {
                        j % 2 == 1
                    }
                }
                (false, true) => {
                    if j == -1 {
                        i % 2 == 1
                    } else {
                        i % 2 == 0
                    }
                }
            };
            if keep {
                out.push(Face {
                    i,
                    j,
                    boundary: row_edge || col_edge,
                });
            }
        }
    }
    out
}

/// Existing corners of a face as `(site index, role)`.
pub(crate) fn corners(d: usize, face: Face) -> Vec<(usize, Corner)> {
    let di = d as isize;
    [
        (face.i, face.j, Corner::Left),
        (face.i, face.j + 1, Corner::Top),
        (face.i + 1, face.j, Corner::Bottom),
        (face.i + 1, face.j + 1, Corner::Right),
    ]
    .into_iter()
    .filter(|&(r, c, _)| (0..di).contains(&r) && (0..di).contains(&c))
    .map(|(r, c, role)| ((r * di + c) as usize, role))
    .collect()
}

fn square_position(d: usize, site: usize) -> Point {
    ((site % d) as f64, -((site / d) as f64))
}

fn square_face_center(face: Face) -> Point {
    (face.j as f64 + 0.5, -(face.i as f64 + 0.5))
}

/// Center of link `(i, j)` on a honeycomb with unit edge length.
pub(crate) fn link_center(d: usize, site: usize) -> Point {
    let (i, j) = ((site / d) as f64, (site % d) as f64);
    ((i + j) * SQRT3_2, (j - i) * 1.5)
}

pub(crate) fn honeycomb_positions(d: usize) -> Vec<Point> {
    (0..d * d)
        .flat_map(|site| {
            let (x, y) = link_center(d, site);
            [(x, y - 0.5), (x, y + 0.5)]
        })
        .collect()
}

/// Left link center shifted right by half a hexagon width; also valid for
/// boundary faces whose left link lies outside the patch.
fn hexagon_center(face: Face) -> Point {
    let (i, j) = (face.i as f64, face.j as f64);
    ((i + j) * SQRT3_2 + SQRT3_2, (j - i) * 1.5)
}

fn build_square(d: usize, letter_for: impl Fn(Face, usize, Corner) -> Letter) -> Vec<Generator> {
    let n = d * d;
    faces(d)
        .into_iter()
        .map(|face| {
            let mut op = PauliOperator::identity(n);
            for (site, role) in corners(d, face) {
                op.set(site, letter_for(face, site, role));
            }
            Generator {
                kind: if face.boundary {
                    GeneratorKind::BoundaryPair
                } else {
                    GeneratorKind::SquarePlaquette
                },
                op,
                center: Some(square_face_center(face)),
            }
        })
        .collect()
}

/// Rotated surface code on `d²` qubits: XXXX faces where `i + j` is even,
/// ZZZZ faces elsewhere, with weight-2 boundary faces of the same rule.
pub fn build_rotated_surface(d: usize) -> Result<StabilizerCode> {
    check_distance(d)?;
    let n = d * d;
    let generators = build_square(d, |face, _, _| {
        if (face.i + face.j).rem_euclid(2) == 0 {
            Letter::X
        } else {
            Letter::Z
        }
    });
    let mid = d / 2;
    let logical_x = PauliOperator::uniform(n, (0..d).map(|j| mid * d + j), Letter::X);
    let logical_z = PauliOperator::uniform(n, (0..d).map(|i| i * d + mid), Letter::Z);
    let positions = (0..n).map(|s| square_position(d, s)).collect();
    StabilizerCode::new(
        Family::RotatedSurface,
        d,
        generators,
        logical_x,
        logical_z,
        positions,
    )
}

/// XZZX code on `d²` qubits: X on each face's main diagonal, Z on its
/// anti-diagonal. Logicals are the pure-X anti-diagonal and the pure-Z main
/// diagonal.
pub fn build_xzzx(d: usize) -> Result<StabilizerCode> {
    check_distance(d)?;
    let n = d * d;
    let generators = build_square(d, |_, _, role| {
        if role.on_main_diagonal() {
            Letter::X
        } else {
            Letter::Z
        }
    });
    let logical_x = PauliOperator::uniform(n, (0..d).map(|i| i * d + (d - 1 - i)), Letter::X);
    let logical_z = PauliOperator::uniform(n, (0..d).map(|i| i * d + i), Letter::Z);
    let positions = (0..n).map(|s| square_position(d, s)).collect();
    StabilizerCode::new(Family::Xzzx, d, generators, logical_x, logical_z, positions)
}

/// Honeycomb letters of one face corner as `(bottom, top)`; `I` marks a
/// qubit outside the hexagon. Going clockwise from the top vertex the
/// hexagon reads X Y Z X Y Z.
pub(crate) fn hexagon_letters(role: Corner) -> (Letter, Letter) {
    match role {
        Corner::Left => (Letter::Y, Letter::Z),
        Corner::Top => (Letter::X, Letter::I),
        Corner::Bottom => (Letter::I, Letter::X),
        Corner::Right => (Letter::Z, Letter::Y),
    }
}

/// The XYZ² code on `2d²` qubits: `(d-1)²` XYZXYZ hexagons, `d²` XX links
/// and `2d-2` XYZ boundary halves.
pub fn build_xyz2(d: usize) -> Result<StabilizerCode> {
    check_distance(d)?;
    let n = 2 * d * d;
    let all_faces = faces(d);
    let hexagon = |face: Face| {
        let mut op = PauliOperator::identity(n);
        for (site, role) in corners(d, face) {
            let (bottom, top) = hexagon_letters(role);
            op.set(2 * site, bottom);
            op.set(2 * site + 1, top);
        }
        Generator {
            kind: if face.boundary {
                GeneratorKind::HalfPlaquette
            } else {
                GeneratorKind::Plaquette
            },
            op,
            center: Some(hexagon_center(face)),
        }
    };
    let mut generators: Vec<Generator> = all_faces
        .iter()
        .filter(|f| !f.boundary)
        .map(|&f| hexagon(f))
        .collect();
    generators.extend((0..d * d).map(|site| Generator {
        kind: GeneratorKind::Link,
        op: PauliOperator::uniform(n, [2 * site, 2 * site + 1], Letter::X),
        center: Some(link_center(d, site)),
    }));
    generators.extend(all_faces.iter().filter(|f| f.boundary).map(|&f| hexagon(f)));

    // X on the bottom qubit of every link of the central row (i = j).
    let logical_x = PauliOperator::uniform(n, (0..d).map(|i| 2 * (i * d + i)), Letter::X);
    // Z bottom, Y top along the central column (i + j = d - 1).
    let mut logical_z = PauliOperator::identity(n);
    for i in 0..d {
        let site = i * d + (d - 1 - i);
        logical_z.set(2 * site, Letter::Z);
        logical_z.set(2 * site + 1, Letter::Y);
    }
    StabilizerCode::new(
        Family::Xyz2,
        d,
        generators,
        logical_x,
        logical_z,
        honeycomb_positions(d),
    )
}
