//! Exact maximum-likelihood decoding by coset enumeration.
//!
//! A set of pairwise-disjoint generators is summed out in closed form: for
//! such a generator `g` acting on support `S`, the coset sum over `{1, g}`
//! factors into `P(E|S) + P((E·g)|S)`. Only the remaining generators are
//! enumerated, in Gray-code order.

use super::{DecodeResult, Diagnostics, LogicalClass, PreparedCode, Syndrome};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::pauli::Letter;

/// Largest code accepted by [`exact_mld_decode`].
pub const EXACT_QUBIT_CAP: usize = 20;

/// Largest number of generators left to enumerate after factorization.
const ENUMERATION_CAP: usize = 24;

pub fn exact_mld_decode(code: &StabilizerCode, s: &Syndrome, noise: &NoiseParams) -> Result<DecodeResult> {
    let prepared = PreparedCode::new(code)?;
    exact_mld_decode_prepared(&prepared, s, noise)
}

pub fn exact_mld_decode_prepared(
    prepared: &PreparedCode,
    s: &Syndrome,
    noise: &NoiseParams,
) -> Result<DecodeResult> {
    let n = prepared.code.num_qubits();
    if n > EXACT_QUBIT_CAP {
        return Err(Error::Capability(format!(
            "exact decoding is limited to {EXACT_QUBIT_CAP} qubits, code has {n}"
        )));
    }
    prepared.check_syndrome(s)?;
    let plan = Plan::new(&prepared.supports, n)?;

    let probs = noise.probs();
    let pmax = probs.iter().cloned().fold(0.0, f64::max);
    let w = probs.map(|p| p / pmax);
    let log_scale = n as f64 * pmax.ln();

    let base: Vec<u8> = prepared
        .pure_error(s)?
        .letters()
        .into_iter()
        .map(Letter::index)
        .collect();
    let mut scores = [f64::NEG_INFINITY; 4];
    let mut enumerated = 0u64;
    for class in LogicalClass::ALL {
        let mut letters = prepared.class_start(&base, class);
        let mut sum = Neumaier::default();
        let steps = 1u64 << plan.outer.len();
        for step in 0..steps {
            if step > 0 {
                let g = plan.outer[step.trailing_zeros() as usize];
                for &(q, l) in &prepared.supports[g] {
                    letters[q] ^= l;
                }
            }
            sum.add(plan.term(&letters, &prepared.supports, &w));
        }
        enumerated += steps << plan.inner.len();
        let total = sum.total();
        if total > 0.0 {
            scores[class.index()] = total.ln() + log_scale;
        }
    }
    Ok(DecodeResult::from_scores(
        scores,
        Diagnostics {
            enumerated,
            ..Diagnostics::default()
        },
    ))
}

struct Plan {
    inner: Vec<usize>,
    outer: Vec<usize>,
    /// Qubits outside every inner support.
    free: Vec<usize>,
}

impl Plan {
    fn new(supports: &[Vec<(usize, u8)>], n: usize) -> Result<Self> {
        let mut order: Vec<usize> = (0..supports.len()).collect();
        order.sort_by_key(|&g| (supports[g].len(), g));
        let mut used = vec![false; n];
        let mut inner = Vec::new();
        let mut outer = Vec::new();
        for g in order {
            if !supports[g].is_empty() && supports[g].iter().all(|&(q, _)| !used[q]) {
                for &(q, _) in &supports[g] {
                    used[q] = true;
                }
                inner.push(g);
            } else {
                outer.push(g);
            }
        }
        outer.sort_unstable();
        if outer.len() > ENUMERATION_CAP {
            return Err(Error::Capability(format!(
                "exact decoding would enumerate 2^{} coset elements",
                outer.len()
            )));
        }
        let free = (0..n).filter(|&q| !used[q]).collect();
        Ok(Self { inner, outer, free })
    }

    fn term(&self, letters: &[u8], supports: &[Vec<(usize, u8)>], w: &[f64; 4]) -> f64 {
        let mut t = 1.0;
        for &q in &self.free {
            t *= w[letters[q] as usize];
        }
        for &g in &self.inner {
            let (mut a, mut b) = (1.0, 1.0);
            for &(q, l) in &supports[g] {
                let e = letters[q];
                a *= w[e as usize];
                b *= w[(e ^ l) as usize];
            }
            t *= a + b;
        }
        t
    }
}

/// Compensated summation of nonnegative terms.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_xyz2, build_xzzx};
    use crate::decode::syndrome;
    use crate::noise::{chain_log_prob, make_noise, sample_chain, Bias};
    use crate::pauli::PauliOperator;
    use crate::rng::{substream, Purpose};
    use std::collections::HashMap;

    fn all_chains(n: usize) -> impl Iterator<Item = PauliOperator> {
        (0u64..1 << (2 * n)).map(move |k| {
            let letters: Vec<Letter> = (0..n).map(|q| Letter::from_index(((k >> (2 * q)) & 3) as u8)).collect();
            PauliOperator::from_letters(&letters)
        })
    }

    #[test]
    fn xzzx_d3_scores_match_brute_force() {
        // Group all 4^9 chains by (syndrome, class relative to the pure error).
        let code = build_xzzx(3).unwrap();
        let prepared = PreparedCode::new(&code).unwrap();
        let noise = make_noise(0.13, Bias::Finite(3.0), Letter::Z).unwrap();
        let mut totals: HashMap<(String, LogicalClass), f64> = HashMap::new();
        for e in all_chains(9) {
            let s = syndrome(&code, &e).unwrap();
            let pe = prepared.pure_error(&s).unwrap();
            let class = crate::decode::logical_class(&code, &e, &pe).unwrap();
            *totals.entry((s.to_string(), class)).or_default() += chain_log_prob(&noise, &e).exp();
        }
        let mut seen = 0;
        for bits in 0u32..256 {
            let s = Syndrome::parse(&format!("{:08b}", bits)).unwrap();
            let r = exact_mld_decode_prepared(&prepared, &s, &noise).unwrap();
            for c in LogicalClass::ALL {
                let expected = totals[&(s.to_string(), c)];
                let got = r.class_scores[c.index()].exp();
                assert!((got - expected).abs() <= 1e-12 * expected, "{s} {c}: {got} vs {expected}");
                seen += 1;
            }
        }
        assert_eq!(seen, 1024);
    }

    #[test]
    fn xyz2_d3_matches_plain_enumeration() {
        let code = build_xyz2(3).unwrap();
        let prepared = PreparedCode::new(&code).unwrap();
        let noise = NoiseParams::depolarizing(0.17).unwrap();
        let lp = noise.log_probs();
        let supports = code.generator_supports();
        for t in 0..20 {
            let mut rng = substream(3, 0, t, Purpose::Noise);
            let e = sample_chain(&noise, 18, &mut rng);
            let s = syndrome(&code, &e).unwrap();
            let r = exact_mld_decode_prepared(&prepared, &s, &noise).unwrap();
            let pe = prepared.pure_error(&s).unwrap();
            for c in LogicalClass::ALL {
                let mut letters: Vec<u8> = pe.mul(&c.operator(&code)).unwrap().letters().into_iter().map(Letter::index).collect();
                let mut total = 0.0;
                for step in 0u64..1 << 17 {
                    if step > 0 {
                        for &(q, l) in &supports[step.trailing_zeros() as usize] {
                            letters[q] ^= l.index();
                        }
                    }
                    total += letters.iter().map(|&l| lp[l as usize]).sum::<f64>().exp();
                }
                let got = r.class_scores[c.index()].exp();
                assert!((got - total).abs() <= 1e-10 * total, "{c}: {got} vs {total}");
            }
        }
    }

    #[test]
    fn pure_noise_leaves_empty_classes() {
        let code = build_xyz2(3).unwrap();
        let noise = NoiseParams::pure(0.2, Letter::Z).unwrap();
        let r = exact_mld_decode(&code, &Syndrome::zero(17), &noise).unwrap();
        let finite = r.class_scores.iter().filter(|s| s.is_finite()).count();
        assert_eq!(finite, 2);
        assert_eq!(r.chosen, LogicalClass::I);
    }

    #[test]
    fn large_codes_are_refused() {
        let code = build_xyz2(5).unwrap();
        let noise = NoiseParams::depolarizing(0.1).unwrap();
        assert!(matches!(
            exact_mld_decode(&code, &Syndrome::zero(49), &noise),
            Err(Error::Capability(_))
        ));
    }
}
