//! Biased single-qubit Pauli channels.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};
use crate::rng::unit_f64;

/// Ratio of the dominant-letter probability to the sum of the other two.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Bias {
    Finite(f64),
    Infinite,
}

impl Bias {
    pub const DEPOLARIZING: Bias = Bias::Finite(0.5);
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bias::Finite(eta) => write!(f, "{eta}"),
            Bias::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Bias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Bias::Infinite);
        }
        let eta: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad bias value {s:?}")))?;
        if eta.is_infinite() && eta > 0.0 {
            Ok(Bias::Infinite)
        } else {
            Ok(Bias::Finite(eta))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub axis: Letter,
    pub eta: Bias,
}

/// Splits a total error rate `p` into per-letter rates with the dominant
/// letter `axis` carrying `p·η/(1+η)` and each other letter `p/(2(1+η))`.
pub fn make_noise(p: f64, eta: Bias, axis: Letter) -> Result<NoiseParams> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Parameter(format!("error rate must lie in [0, 1), got {p}")));
    }
    if axis == Letter::I {
        return Err(Error::Parameter("bias axis must be X, Y or Z".into()));
    }
    let (major, minor) = match eta {
        Bias::Infinite => (p, 0.0),
        Bias::Finite(e) if e > 0.0 && e.is_finite() => {
            let minor = p / (2.0 * (1.0 + e));
            (p * e / (1.0 + e), minor)
        }
        Bias::Finite(e) => {
            return Err(Error::Parameter(format!("bias must be positive, got {e}")));
        }
    };
    let pick = |l: Letter| if l == axis { major } else { minor };
    Ok(NoiseParams {
        p,
        px: pick(Letter::X),
        py: pick(Letter::Y),
        pz: pick(Letter::Z),
        axis,
        eta,
    })
}

impl NoiseParams {
    pub fn depolarizing(p: f64) -> Result<Self> {
        make_noise(p, Bias::DEPOLARIZING, Letter::Z)
    }

    pub fn pure(p: f64, axis: Letter) -> Result<Self> {
        make_noise(p, Bias::Infinite, axis)
    }

    /// Same bias and axis at a different total rate.
    pub fn with_rate(&self, p: f64) -> Result<Self> {
        make_noise(p, self.eta, self.axis)
    }

    pub fn prob(&self, letter: Letter) -> f64 {
        match letter {
            Letter::I => 1.0 - self.p,
            Letter::X => self.px,
            Letter::Y => self.py,
            Letter::Z => self.pz,
        }
    }

    /// Probabilities indexed by [`Letter::index`].
    pub fn probs(&self) -> [f64; 4] {
        [1.0 - self.p, self.px, self.pz, self.py]
    }

    /// Natural logs indexed by [`Letter::index`]; zero mass maps to `-inf`.
    pub fn log_probs(&self) -> [f64; 4] {
        self.probs().map(f64::ln)
    }

    /// Exchanges the roles of two letters, e.g. a Z-biased channel becomes
    /// the matching Y-biased one.
    pub fn swap_letters(&self, a: Letter, b: Letter) -> Result<Self> {
        let map = |l: Letter| {
            if l == a {
                b
            } else if l == b {
                a
            } else {
                l
            }
        };
        make_noise(self.p, self.eta, map(self.axis))
    }
}

impl fmt::Display for NoiseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},eta={},axis={}", self.p, self.eta, self.axis)
    }
}

/// Parses `p=<float>,eta=<float|inf>,axis=<X|Y|Z>`.
impl FromStr for NoiseParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut p, mut eta, mut axis) = (None, None, None);
        for part in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in noise spec, got {part:?}")))?;
            match key.trim() {
                "p" => {
                    p = Some(value.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!("bad error rate {value:?}"))
                    })?)
                }
                "eta" => eta = Some(value.parse::<Bias>()?),
                "axis" => {
                    let l: Letter = value.parse()?;
                    if l == Letter::I {
                        return Err(Error::Parse("noise axis must be X, Y or Z".into()));
                    }
                    axis = Some(l);
                }
                other => return Err(Error::Parse(format!("unknown noise key {other:?}"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("noise spec is missing p".into()))?;
        make_noise(p, eta.unwrap_or(Bias::DEPOLARIZING), axis.unwrap_or(Letter::Z))
    }
}

/// Draws one letter per qubit, one 64-bit word per qubit in qubit order.
///
/// Each word is compared against the bias axis first and then the two other
/// letters in X, Y, Z order, so exchanging the axis with another letter
/// relabels the sampled chains without changing anything else.
pub fn sample_chain<R: RngCore>(noise: &NoiseParams, n: usize, rng: &mut R) -> PauliOperator {
    let mut others = [Letter::X, Letter::Y, Letter::Z].into_iter().filter(|&l| l != noise.axis);
    let order = [noise.axis, others.next().unwrap(), others.next().unwrap()];
    let mut cumulative = [0.0; 3];
    let mut acc = 0.0;
    for (c, &l) in cumulative.iter_mut().zip(&order) {
        acc += noise.prob(l);
        *c = acc;
    }
    let mut chain = PauliOperator::identity(n);
    for q in 0..n {
        let u = unit_f64(rng.next_u64());
        if let Some(i) = cumulative.iter().position(|&c| u < c) {
            chain.set(q, order[i]);
        }
    }
    chain
}

/// Sum of per-qubit log-probabilities; `-inf` if any letter has zero mass.
pub fn chain_log_prob(noise: &NoiseParams, chain: &PauliOperator) -> f64 {
    let lp = noise.log_probs();
    let mut counts = [0usize; 4];
    for l in chain.letters() {
        counts[l.index() as usize] += 1;
    }
    counts_log_prob(&lp, &counts)
}

/// `Σ count[l]·log p[l]`, treating `0·(-inf)` as zero.
pub fn counts_log_prob(log_probs: &[f64; 4], counts: &[usize; 4]) -> f64 {
    counts
        .iter()
        .zip(log_probs)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &lp)| c as f64 * lp)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn depolarizing_anchor() {
        let n = make_noise(0.3, Bias::Finite(0.5), Letter::Z).unwrap();
        for v in [n.px, n.py, n.pz] {
            assert!(close(v, 0.1, 1e-15), "{v}");
        }
    }

    #[test]
    fn infinite_bias_anchor() {
        let n = make_noise(0.1, Bias::Infinite, Letter::Z).unwrap();
        assert_eq!((n.px, n.py, n.pz), (0.0, 0.0, 0.1));
    }

    #[test]
    fn eta_ten() {
        let n = make_noise(0.1, Bias::Finite(10.0), Letter::Z).unwrap();
        // Solving pz/(px+py) = 10, px = py, sum = 0.1 by hand.
        assert!(close(n.pz, 1.0 / 11.0, 1e-15));
        assert!(close(n.px, 0.1 / 22.0, 1e-15));
        assert_eq!(n.px, n.py);
        assert!(close(n.pz / (n.px + n.py), 10.0, 1e-12));
        assert!(close(n.px + n.py + n.pz, 0.1, 2.0 * f64::EPSILON * 0.1));
    }

    #[test]
    fn cyclic_axes() {
        let n = make_noise(0.2, Bias::Finite(3.0), Letter::X).unwrap();
        assert!(close(n.px / (n.py + n.pz), 3.0, 1e-12));
        assert_eq!(n.py, n.pz);
        let n = make_noise(0.2, Bias::Finite(3.0), Letter::Y).unwrap();
        assert!(close(n.py / (n.px + n.pz), 3.0, 1e-12));
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_noise(1.0, Bias::DEPOLARIZING, Letter::Z).is_err());
        assert!(make_noise(-0.1, Bias::DEPOLARIZING, Letter::Z).is_err());
        assert!(make_noise(0.1, Bias::Finite(0.0), Letter::Z).is_err());
        assert!(make_noise(0.1, Bias::Finite(-1.0), Letter::Z).is_err());
    }

    #[test]
    fn spec_string_parsing() {
        let n: NoiseParams = "p=0.1,eta=inf,axis=Y".parse().unwrap();
        assert_eq!((n.py, n.eta), (0.1, Bias::Infinite));
        let back: NoiseParams = n.to_string().parse().unwrap();
        assert_eq!(back, n);
        assert!("p=0.1,eta=2,axis=Q".parse::<NoiseParams>().is_err());
        assert!("p=0.1,axis=I".parse::<NoiseParams>().is_err());
        assert!("eta=2".parse::<NoiseParams>().is_err());
    }

    #[test]
    fn zero_rate_samples_identity() {
        let noise = NoiseParams::depolarizing(0.0).unwrap();
        let mut rng = substream(1, 0, 0, Purpose::Noise);
        for _ in 0..100 {
            assert!(sample_chain(&noise, 50, &mut rng).is_identity());
        }
    }

    #[test]
    fn pure_noise_samples_only_axis_letter() {
        let noise = NoiseParams::pure(0.4, Letter::Z).unwrap();
        let mut rng = substream(2, 0, 0, Purpose::Noise);
        for _ in 0..200 {
            let c = sample_chain(&noise, 30, &mut rng);
            assert!(c.letters().iter().all(|&l| l == Letter::I || l == Letter::Z));
        }
    }

    #[test]
    fn mean_weight_matches_binomial() {
        let noise = NoiseParams::depolarizing(0.1).unwrap();
        let mut rng = substream(3, 0, 0, Purpose::Noise);
        let samples = 100_000;
        let total: usize = (0..samples).map(|_| sample_chain(&noise, 50, &mut rng).weight()).sum();
        let mean = total as f64 / samples as f64;
        let sigma = (50.0f64 * 0.1 * 0.9).sqrt() / (samples as f64).sqrt();
        assert!((mean - 5.0).abs() < 5.0 * sigma, "mean {mean}");
    }

    #[test]
    fn letter_frequencies_converge() {
        let noise = make_noise(0.3, Bias::Finite(2.0), Letter::Y).unwrap();
        let mut rng = substream(4, 0, 0, Purpose::Noise);
        let draws = 1_000_000usize;
        let mut counts = [0usize; 4];
        let chunk = 100;
        for _ in 0..draws / chunk {
            for l in sample_chain(&noise, chunk, &mut rng).letters() {
                counts[l.index() as usize] += 1;
            }
        }
        for (i, &p) in noise.probs().iter().enumerate() {
            let freq = counts[i] as f64 / draws as f64;
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((freq - p).abs() < 5.0 * se, "letter {i}: {freq} vs {p}");
        }
    }

    #[test]
    fn log_prob_examples() {
        let noise = NoiseParams::depolarizing(0.1).unwrap();
        let id = PauliOperator::identity(18);
        assert!(close(chain_log_prob(&noise, &id), 18.0 * 0.9f64.ln(), 1e-12));
        let x: PauliOperator = "X".parse().unwrap();
        assert!(close(chain_log_prob(&noise, &x), (0.1f64 / 3.0).ln(), 1e-12));
        let pure_z = NoiseParams::pure(0.1, Letter::Z).unwrap();
        let xs: PauliOperator = "XIX".parse().unwrap();
        assert_eq!(chain_log_prob(&pure_z, &xs), f64::NEG_INFINITY);
    }

    #[test]
    fn probabilities_normalize_exhaustively() {
        for noise in [
            make_noise(0.27, Bias::Finite(4.0), Letter::X).unwrap(),
            NoiseParams::pure(0.2, Letter::Z).unwrap(),
        ] {
            for n in 1..=8usize {
                let mut total = 0.0;
                for code in 0..(1u32 << (2 * n)) {
                    let letters: Vec<Letter> = (0..n)
                        .map(|q| Letter::from_index(((code >> (2 * q)) & 3) as u8))
                        .collect();
                    total += chain_log_prob(&noise, &PauliOperator::from_letters(&letters)).exp();
                }
                assert!(close(total, 1.0, 1e-12), "n={n}: {total}");
            }
        }
    }
}
