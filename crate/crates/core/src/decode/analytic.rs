//! Closed-form optimal failure rates under pure Pauli noise.
//!
//! * XYZ², pure Z or Y: only the all-Z (all-Y) logical can be confused with
//!   the error, so the decoder fails when more than half of the `N = 2d²`
//!   qubits are hit, and half the time at exactly `N/2`.
//! * XYZ², pure X: every link of the central row carries an independent
//!   parity bit, flipped with probability `2p(1-p)`. A majority over the `d`
//!   links decides.
//! * XZZX, pure X or Z: a repetition code of length `d`.
//! * XZZX, pure Y: the weight-`d²` logical; majority over `d²` qubits.

use crate::code::Family;
use crate::error::{Error, Result};
use crate::pauli::Letter;

/// Probability that the optimal decoder fails under pure `axis` noise at rate `p`.
pub fn analytic_pf_pure(family: Family, d: usize, p: f64, axis: Letter) -> Result<f64> {
    Ok(form(family, d, p, axis)?.failure())
}

/// Complement of [`analytic_pf_pure`], summed over the success terms directly
/// so that it stays accurate when the failure rate is close to one.
pub fn analytic_pf_pure_success(family: Family, d: usize, p: f64, axis: Letter) -> Result<f64> {
    Ok(form(family, d, p, axis)?.success())
}

/// `Σ_n C(N,n) a^n b^(N-n)` split at a majority threshold.
struct Majority {
    total: usize,
    a: f64,
    b: f64,
}

impl Majority {
    /// Weight of outcome `n` in the failure sum.
    fn failure_weight(&self, n: usize) -> f64 {
        let twice = 2 * n;
        if twice > self.total {
            1.0
        } else if twice == self.total {
            0.5
        } else {
            0.0
        }
    }

    fn failure(&self) -> f64 {
        // With a = b the weights pair up as w(n) + w(N-n) = 1.
        if self.a == self.b {
            return 0.5;
        }
        self.sum(|n| self.failure_weight(n))
    }

    fn success(&self) -> f64 {
        if self.a == self.b {
            return 0.5;
        }
        self.sum(|n| 1.0 - self.failure_weight(n))
    }

    fn sum(&self, weight: impl Fn(usize) -> f64) -> f64 {
        let (la, lb) = (self.a.ln(), self.b.ln());
        let mut ln_choose = 0.0f64;
        let mut terms = Vec::with_capacity(self.total + 1);
        for n in 0..=self.total {
            if n > 0 {
                ln_choose += ((self.total - n + 1) as f64 / n as f64).ln();
            }
            let w = weight(n);
            if w == 0.0 {
                continue;
            }
            let ln_a = if n == 0 { 0.0 } else { n as f64 * la };
            let ln_b = if n == self.total { 0.0 } else { (self.total - n) as f64 * lb };
            terms.push(w * (ln_choose + ln_a + ln_b).exp());
        }
        terms.sort_by(f64::total_cmp);
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for x in terms {
            let t = sum + x;
            c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
            sum = t;
        }
        sum + c
    }
}

fn form(family: Family, d: usize, p: f64, axis: Letter) -> Result<Majority> {
    crate::code::check_distance(d)?;
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Parameter(format!("p must lie in [0, 1/2], got {p}")));
    }
    if axis == Letter::I {
        return Err(Error::Parameter("axis must be X, Y or Z".into()));
    }
    match (family, axis) {
        (Family::Xyz2, Letter::X) => Ok(Majority {
            total: d,
            a: 2.0 * p * (1.0 - p),
            b: (1.0 - p) * (1.0 - p) + p * p,
        }),
        (Family::Xyz2, _) => Ok(Majority {
            total: 2 * d * d,
            a: p,
            b: 1.0 - p,
        }),
        (Family::Xzzx, Letter::Y) => Ok(Majority {
            total: d * d,
            a: p,
            b: 1.0 - p,
        }),
        (Family::Xzzx, _) => Ok(Majority {
            total: d,
            a: p,
            b: 1.0 - p,
        }),
        (other, _) => Err(Error::Parameter(format!(
            "no closed form for family {other}; expected xyz2 or xzzx"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn choose(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn xyz2_x_d3_closed_form() {
        // p_o = 0.18, p_e = 0.82: 3·p_o²·p_e + p_o³.
        let pf = analytic_pf_pure(Family::Xyz2, 3, 0.1, Letter::X).unwrap();
        assert!((pf - 0.085536).abs() < 1e-15, "{pf}");
    }

    #[test]
    fn xzzx_z_d3_closed_form() {
        let pf = analytic_pf_pure(Family::Xzzx, 3, 0.1, Letter::Z).unwrap();
        assert!((pf - 0.028).abs() < 1e-15, "{pf}");
    }

    #[test]
    fn xyz2_z_d3_matches_direct_sum() {
        let p: f64 = 0.1;
        let mut direct = 0.0;
        for n in 9..=18u64 {
            let w = if n == 9 { 0.5 } else { 1.0 };
            direct += w * choose(18, n) * p.powi(n as i32) * (1.0 - p).powi(18 - n as i32);
        }
        let pf = analytic_pf_pure(Family::Xyz2, 3, p, Letter::Z).unwrap();
        assert!((pf - direct).abs() < 1e-12 * direct);
        assert!((pf - 1.1464e-5).abs() < 1e-8, "{pf}");
        assert_eq!(pf, analytic_pf_pure(Family::Xyz2, 3, p, Letter::Y).unwrap());
    }

    #[test]
    fn half_rate_and_zero_rate() {
        for (family, axis) in [
            (Family::Xyz2, Letter::X),
            (Family::Xyz2, Letter::Z),
            (Family::Xzzx, Letter::Z),
            (Family::Xzzx, Letter::Y),
        ] {
            for d in [3, 5, 7] {
                assert_eq!(analytic_pf_pure(family, d, 0.5, axis).unwrap(), 0.5);
                let near = analytic_pf_pure(family, d, 0.5 - 1e-9, axis).unwrap();
                assert!((near - 0.5).abs() < 1e-6, "{family} {axis} {d}: {near}");
                assert_eq!(analytic_pf_pure(family, d, 0.0, axis).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn success_complements_failure() {
        for (family, axis) in [
            (Family::Xyz2, Letter::X),
            (Family::Xyz2, Letter::Y),
            (Family::Xzzx, Letter::X),
            (Family::Xzzx, Letter::Y),
        ] {
            for d in [3, 5, 9] {
                for p in [0.01, 0.1, 0.3, 0.45] {
                    let f = analytic_pf_pure(family, d, p, axis).unwrap();
                    let s = analytic_pf_pure_success(family, d, p, axis).unwrap();
                    assert!((f + s - 1.0).abs() < 1e-13, "{family} {axis} {d} {p}: {}", f + s - 1.0);
                }
            }
        }
    }

    #[test]
    fn success_is_failure_at_one_minus_p() {
        // The Z/Y and XZZX sums are binomial in (p, 1-p); evaluating the
        // failure sum past 1/2 mirrors it onto the success sum.
        for (family, axis) in [
            (Family::Xyz2, Letter::Z),
            (Family::Xzzx, Letter::X),
            (Family::Xzzx, Letter::Y),
        ] {
            for d in [3, 5] {
                for p in [0.1, 0.25, 0.4] {
                    let s = analytic_pf_pure_success(family, d, p, axis).unwrap();
                    let mut mirrored = form(family, d, p, axis).unwrap();
                    std::mem::swap(&mut mirrored.a, &mut mirrored.b);
                    let f = mirrored.failure();
                    assert!((s - f).abs() < 1e-14 * s.max(1e-300), "{family} {axis} {d} {p}: {s} vs {f}");
                }
            }
        }
    }

    #[test]
    fn xyz2_x_is_symmetric_in_p() {
        // p_o and p_e are unchanged by p -> 1-p, so this form does not mirror.
        let mut m = form(Family::Xyz2, 3, 0.1, Letter::X).unwrap();
        let f = m.failure();
        m.a = 2.0 * 0.9 * 0.1;
        m.b = 0.9 * 0.9 + 0.1 * 0.1;
        assert!((m.failure() - f).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(analytic_pf_pure(Family::Xyz2, 3, 0.6, Letter::Z).is_err());
        assert!(analytic_pf_pure(Family::Xyz2, 3, -0.1, Letter::Z).is_err());
        assert!(analytic_pf_pure(Family::Xyz2, 3, f64::NAN, Letter::Z).is_err());
        assert!(analytic_pf_pure(Family::Xyz2, 4, 0.1, Letter::Z).is_err());
        assert!(analytic_pf_pure(Family::Xyz2, 3, 0.1, Letter::I).is_err());
        assert!(analytic_pf_pure(Family::RotatedSurface, 3, 0.1, Letter::Z).is_err());
    }

    #[test]
    fn low_rate_slopes() {
        // log-log slope between p and p/2 approaches the minimal failing count.
        let slope = |family, d, axis| {
            let (p1, p2) = (1e-6, 5e-7);
            let f1: f64 = analytic_pf_pure(family, d, p1, axis).unwrap();
            let f2: f64 = analytic_pf_pure(family, d, p2, axis).unwrap();
            (f1.ln() - f2.ln()) / (p1.ln() - p2.ln())
        };
        for d in [3usize, 5, 7] {
            let z = slope(Family::Xyz2, d, Letter::Z);
            assert!((z / (d * d) as f64 - 1.0).abs() < 0.05, "Z d={d}: {z}");
            let x = slope(Family::Xyz2, d, Letter::X);
            assert!((x / d.div_ceil(2) as f64 - 1.0).abs() < 0.05, "X d={d}: {x}");
        }
    }
}
