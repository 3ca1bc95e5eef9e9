//! Line-oriented text format:
//!
//! ```text
//! <family> <d> <n>
//! <kind> <index> <letters>      one line per generator, in order
//! LX <letters>
//! LZ <letters>
//! Q <qubit> <x> <y>             one line per qubit
//! C <generator> <x> <y>         one line per generator with a center
//! ```
//!
//! Floats are written in shortest round-trip form, so
//! `parse_text(to_text(c)) == c` holds exactly.

use std::fmt::Write as _;

use super::{Family, Generator, GeneratorKind, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

impl StabilizerCode {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.family(), self.distance_parameter(), self.num_qubits());
        for (i, g) in self.generators().iter().enumerate() {
            let _ = writeln!(s, "{} {} {}", g.kind.name(), i, g.op);
        }
        let _ = writeln!(s, "LX {}", self.logical_x());
        let _ = writeln!(s, "LZ {}", self.logical_z());
        for (q, (x, y)) in self.positions().iter().enumerate() {
            let _ = writeln!(s, "Q {q} {x:?} {y:?}");
        }
        for (i, g) in self.generators().iter().enumerate() {
            if let Some((x, y)) = g.center {
                let _ = writeln!(s, "C {i} {x:?} {y:?}");
            }
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: String| Error::Parse(format!("line {line}: {msg}"));

        let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [family, d, n] = fields[..] else {
            return Err(err(ln, "expected header `family d n`".into()));
        };
        let family: Family = family.parse().map_err(|e| err(ln, format!("{e}")))?;
        let d: usize = d.parse().map_err(|_| err(ln, format!("bad distance {d:?}")))?;
        let n: usize = n.parse().map_err(|_| err(ln, format!("bad qubit count {n:?}")))?;

        let parse_op = |ln: usize, s: &str| -> Result<PauliOperator> {
            let op: PauliOperator = s.parse().map_err(|e| err(ln, format!("{e}")))?;
            if op.num_qubits() != n {
                return Err(err(ln, format!("operator has {} letters, expected {n}", op.num_qubits())));
            }
            Ok(op)
        };
        let parse_f = |ln: usize, s: &str| -> Result<f64> {
            s.parse().map_err(|_| err(ln, format!("bad coordinate {s:?}")))
        };

        let mut generators = Vec::new();
        let logical_x = loop {
            let (ln, line) = lines.next().ok_or_else(|| Error::Parse("missing LX line".into()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[..] {
                ["LX", ops] => break parse_op(ln, ops)?,
                [kind, index, ops] => {
                    let kind: GeneratorKind = kind.parse().map_err(|e| err(ln, format!("{e}")))?;
                    if index.parse::<usize>().ok() != Some(generators.len()) {
                        return Err(err(ln, format!("expected generator index {}", generators.len())));
                    }
                    generators.push(Generator {
                        kind,
                        op: parse_op(ln, ops)?,
                        center: None,
                    });
                }
                _ => return Err(err(ln, "expected `kind index letters` or `LX letters`".into())),
            }
        };
        let logical_z = match lines.next() {
            Some((ln, line)) => match line.split_whitespace().collect::<Vec<_>>()[..] {
                ["LZ", ops] => parse_op(ln, ops)?,
                _ => return Err(err(ln, "expected `LZ letters`".into())),
            },
            None => return Err(Error::Parse("missing LZ line".into())),
        };

        let mut positions = Vec::with_capacity(n);
        for (ln, line) in lines {
            match line.split_whitespace().collect::<Vec<_>>()[..] {
                ["Q", q, x, y] => {
                    if q.parse::<usize>().ok() != Some(positions.len()) {
                        return Err(err(ln, format!("expected qubit index {}", positions.len())));
                    }
                    positions.push((parse_f(ln, x)?, parse_f(ln, y)?));
                }
                ["C", g, x, y] => {
                    let g: usize = g.parse().map_err(|_| err(ln, format!("bad generator index {g:?}")))?;
                    let gen = generators
                        .get_mut(g)
                        .ok_or_else(|| err(ln, format!("generator {g} does not exist")))?;
                    gen.center = Some((parse_f(ln, x)?, parse_f(ln, y)?));
                }
                _ => return Err(err(ln, "expected `Q` or `C` line".into())),
            }
        }
        if positions.len() != n {
            return Err(Error::Parse(format!(
                "found {} qubit coordinates, expected {n}",
                positions.len()
            )));
        }
        StabilizerCode::new(family, d, generators, logical_x, logical_z, positions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_rotated_surface, build_xyz2, build_xzzx};

    #[test]
    fn round_trip_is_exact() {
        for code in [
            build_xyz2(3).unwrap(),
            build_xyz2(5).unwrap(),
            build_xzzx(3).unwrap(),
            build_rotated_surface(5).unwrap(),
        ] {
            let text = code.to_text();
            let back = StabilizerCode::parse_text(&text).unwrap();
            assert_eq!(back, code);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn header_and_generator_lines() {
        let text = build_xyz2(3).unwrap().to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("xyz2 3 18"));
        let gen_lines = text
            .lines()
            .filter(|l| {
                ["plaquette ", "link ", "half_plaquette "]
                    .iter()
                    .any(|k| l.starts_with(k))
            })
            .count();
        assert_eq!(gen_lines, 17);
    }

    #[test]
    fn malformed_input_names_the_line() {
        let mut text = build_xzzx(3).unwrap().to_text();
        text = text.replacen("LX ", "LQ ", 1);
        let e = StabilizerCode::parse_text(&text).unwrap_err().to_string();
        assert!(e.contains("line 10"), "{e}");
    }
}
