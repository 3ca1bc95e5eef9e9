//! Effective-weight decoding by Markov-chain sampling of each coset.
//!
//! For each class a Metropolis walk multiplies the current chain by a
//! uniformly chosen generator. Proposals are weighed under a sampling noise
//! model whose rate may differ from the physical one. Each distinct chain the
//! walk visits after burn-in is scored under the physical model, and the class
//! score is the log of the summed probabilities of those chains.
//!
//! With infinite bias the sampling model gives zero weight to some letters.
//! Each walk then starts from a chain of the class built only from the
//! allowed letter, found by solving a linear system, and proposals that
//! would introduce a forbidden letter are rejected. Classes without such a
//! chain score `-inf`.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::Exp1;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DecodeResult, Diagnostics, LogicalClass, PreparedCode, Syndrome};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::{gf2_solve, BitMatrix, BitVec};
use crate::noise::{counts_log_prob, Bias, NoiseParams};
use crate::pauli::{Letter, PauliOperator};

/// Range the sampling rate is clamped into for a given noise regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PSamplePreset {
    Depolarizing,
    XBiased,
    ZyBiased,
}

impl PSamplePreset {
    pub fn range(self) -> (f64, f64) {
        match self {
            PSamplePreset::Depolarizing => (0.05, 0.6),
            PSamplePreset::XBiased => (0.14, 0.37),
            PSamplePreset::ZyBiased => (0.26, 0.41),
        }
    }

    pub fn p_sample(self, p: f64) -> f64 {
        let (lo, hi) = self.range();
        p.clamp(lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// Noise model the walk samples from: the physical model at rate `p_sample`.
    pub sample_noise: NoiseParams,
    pub steps_per_class: usize,
    pub burn_in: usize,
    /// Distinct chains kept per class; later ones are ignored.
    pub unique_chain_cap: usize,
}

impl DecoderConfig {
    pub const DEFAULT_UNIQUE_CAP: usize = 1 << 16;

    /// Defaults: `200·n` steps, `10·n` burn-in, and `p_sample` equal to the
    /// physical rate clamped to `[0.05, 0.6]` unless given.
    pub fn new(num_qubits: usize, physical: &NoiseParams, p_sample: Option<f64>) -> Result<Self> {
        let ps = p_sample.unwrap_or_else(|| PSamplePreset::Depolarizing.p_sample(physical.p));
        if !(ps > 0.0 && ps < 1.0) {
            return Err(Error::Parameter(format!("p_sample must lie in (0, 1), got {ps}")));
        }
        Ok(Self {
            sample_noise: physical.with_rate(ps)?,
            steps_per_class: 200 * num_qubits,
            burn_in: 10 * num_qubits,
            unique_chain_cap: Self::DEFAULT_UNIQUE_CAP,
        })
    }

    pub fn p_sample(&self) -> f64 {
        self.sample_noise.p
    }
}

pub fn ewd_decode(
    code: &StabilizerCode,
    s: &Syndrome,
    physical: &NoiseParams,
    config: &DecoderConfig,
    rng: &mut impl RngCore,
) -> Result<DecodeResult> {
    let prepared = PreparedCode::new(code)?;
    ewd_decode_prepared(&prepared, s, physical, config, rng)
}

pub fn ewd_decode_prepared(
    prepared: &PreparedCode,
    s: &Syndrome,
    physical: &NoiseParams,
    config: &DecoderConfig,
    rng: &mut impl RngCore,
) -> Result<DecodeResult> {
    prepared.check_syndrome(s)?;
    if config.unique_chain_cap == 0 {
        return Err(Error::Parameter("unique_chain_cap must be positive".into()));
    }
    let n = prepared.code.num_qubits();
    let m = prepared.supports.len();
    let zobrist = zobrist_table(n);
    let sample_lp = config.sample_noise.log_probs();
    let physical_lp = physical.log_probs();
    let transitions = Transitions::new(&sample_lp);

    let base: Vec<u8> = prepared
        .pure_error(s)?
        .letters()
        .into_iter()
        .map(Letter::index)
        .collect();
    let mut scores = [f64::NEG_INFINITY; 4];
    let mut diag = Diagnostics::default();
    let mut seen: HashSet<u64, BuildHasherDefault<IdentityHasher>> = HashSet::default();

    let pure_axis = pure_axis(&sample_lp);
    let biased_base = match (pure_axis, physical.eta) {
        (None, Bias::Finite(eta)) if eta > 0.5 => axis_aligned_base(prepared, &base, physical.axis)?,
        _ => None,
    };
    for class in LogicalClass::ALL {
        let start = prepared.class_start(biased_base.as_ref().unwrap_or(&base), class);
        let start = match pure_axis {
            None => start,
            Some(axis) => match pure_start(prepared, &start, axis)? {
                Some(start) => start,
                None => continue,
            },
        };
        let mut walk = Walk::new(start, &sample_lp, &zobrist);
        let mut acc = LogSumExp::default();
        seen.clear();
        let mut saturated = false;
        let mut record = |walk: &Walk| {
            if seen.len() >= config.unique_chain_cap {
                saturated |= !seen.contains(&walk.hash);
                return;
            }
            if seen.insert(walk.hash) {
                acc.add(counts_log_prob(&physical_lp, &walk.counts));
            }
        };
        let total = config.burn_in + config.steps_per_class;
        for step in 0..total {
            if m > 0 {
                let g = rng.gen_range(0..m);
                let accepted = walk.propose(&prepared.supports[g], &transitions, &zobrist, rng);
                diag.proposals += 1;
                diag.accepted += u64::from(accepted);
                if step >= config.burn_in && (accepted || step == config.burn_in) {
                    record(&walk);
                }
            } else if step == config.burn_in {
                record(&walk);
            }
        }
        if total == config.burn_in {
            record(&walk);
        }
        diag.unique_chains[class.index()] = seen.len() as u64;
        diag.saturated[class.index()] = saturated;
        scores[class.index()] = acc.value();
    }
    Ok(DecodeResult::from_scores(scores, diag))
}

struct Walk {
    letters: Vec<u8>,
    counts: [usize; 4],
    /// Letters with zero probability under the sampling model.
    forbidden: usize,
    /// Sampling log-probability summed over the allowed letters.
    log_prob: f64,
    hash: u64,
}

impl Walk {
    fn new(letters: Vec<u8>, lp: &[f64; 4], zobrist: &[[u64; 4]]) -> Self {
        let mut w = Walk {
            counts: [0; 4],
            forbidden: 0,
            log_prob: 0.0,
            hash: 0,
            letters,
        };
        for (q, &l) in w.letters.iter().enumerate() {
            w.counts[l as usize] += 1;
            w.hash ^= zobrist[q][l as usize];
            if lp[l as usize].is_finite() {
                w.log_prob += lp[l as usize];
            } else {
                w.forbidden += 1;
            }
        }
        w
    }

    fn propose(&mut self, support: &[(usize, u8)], table: &Transitions, zobrist: &[[u64; 4]], rng: &mut impl RngCore) -> bool {
        let mut d_forbidden = 0i32;
        let mut d_lp = 0.0;
        for &(q, l) in support {
            let t = (self.letters[q] << 2 | l) as usize;
            d_lp += table.d_lp[t];
            d_forbidden += table.d_forbidden[t];
        }
        // Walks only start on forbidden letters when no allowed start
        // exists, so the first two arms matter only as a fallback.
        let accept = match d_forbidden {
            d if d < 0 => true,
            d if d > 0 => false,
            // P(Exp(1) > x) = exp(-x)
            _ => d_lp >= 0.0 || rng.sample::<f64, _>(Exp1) > -d_lp,
        };
        if accept {
            for &(q, l) in support {
                let old = self.letters[q];
                let new = old ^ l;
                self.letters[q] = new;
                self.counts[old as usize] -= 1;
                self.counts[new as usize] += 1;
                self.hash ^= zobrist[q][old as usize] ^ zobrist[q][new as usize];
            }
            self.forbidden = (self.forbidden as isize + d_forbidden as isize) as usize;
            self.log_prob += d_lp;
        }
        accept
    }
}

/// Change in sampling log-probability and in forbidden-letter count when a
/// qubit holding letter `old` is multiplied by `l`, indexed by `old << 2 | l`.
struct Transitions {
    d_lp: [f64; 16],
    d_forbidden: [i32; 16],
}

impl Transitions {
    fn new(lp: &[f64; 4]) -> Self {
        let finite = |l: usize| if lp[l].is_finite() { lp[l] } else { 0.0 };
        let forbidden = |l: usize| i32::from(!lp[l].is_finite());
        let mut t = Transitions {
            d_lp: [0.0; 16],
            d_forbidden: [0; 16],
        };
        for old in 0..4 {
            for l in 0..4 {
                let new = old ^ l;
                t.d_lp[old << 2 | l] = finite(new) - finite(old);
                t.d_forbidden[old << 2 | l] = forbidden(new) - forbidden(old);
            }
        }
        t
    }
}

/// The only non-identity letter with nonzero sampling weight, if exactly one.
fn pure_axis(lp: &[f64; 4]) -> Option<Letter> {
    let allowed: Vec<Letter> = Letter::NON_IDENTITY
        .into_iter()
        .filter(|l| lp[l.index() as usize].is_finite())
        .collect();
    match allowed[..] {
        [axis] => Some(axis),
        _ => None,
    }
}

/// A chain built from `I` and `axis` only, with the same syndrome and class
/// as `start`.
fn pure_start(prepared: &PreparedCode, start: &[u8], axis: Letter) -> Result<Option<Vec<u8>>> {
    let code = &prepared.code;
    let n = code.num_qubits();
    let start_op = operator(start);
    let row = |op: &PauliOperator| anti_row(op, axis);
    let mut rows: Vec<BitVec> = code.generators().iter().map(|g| row(&g.op)).collect();
    rows.push(row(code.logical_x()));
    rows.push(row(code.logical_z()));
    let mut target = code.syndrome_bits(&start_op)?;
    target = target.concat(&BitVec::from_bools([
        !start_op.commutes(code.logical_x())?,
        !start_op.commutes(code.logical_z())?,
    ]));
    let system = BitMatrix::from_rows(n, rows)?;
    Ok(gf2_solve(&system, &target)?
        .map(|v| (0..n).map(|q| if v.get(q) { axis.index() } else { 0 }).collect()))
}

/// A chain in the same class as `base`, with the same syndrome, built from
/// the bias axis letter plus a logical representative. Walks under biased
/// noise mix poorly from a generic pure error; starting near the axis-aligned
/// chains puts them close to where the class weight is concentrated.
fn axis_aligned_base(prepared: &PreparedCode, base: &[u8], axis: Letter) -> Result<Option<Vec<u8>>> {
    let code = &prepared.code;
    let n = code.num_qubits();
    let base_op = operator(base);
    let system = BitMatrix::from_rows(n, code.generators().iter().map(|g| anti_row(&g.op, axis)).collect())?;
    let Some(v) = gf2_solve(&system, &code.syndrome_bits(&base_op)?)? else {
        return Ok(None);
    };
    let mut best = v.clone();
    let basis = system.nullspace();
    if basis.len() <= 12 {
        let mut cur = v;
        for step in 1u64..(1 << basis.len()) {
            cur.xor_assign(&basis[step.trailing_zeros() as usize]);
            if cur.count_ones() < best.count_ones() {
                best = cur.clone();
            }
        }
    }
    let mut chain = PauliOperator::uniform(n, best.ones(), axis);
    let class = super::logical_class(code, &chain, &base_op)?;
    chain.mul_assign(&class.operator(code))?;
    Ok(Some(chain.letters().into_iter().map(Letter::index).collect()))
}

fn operator(letters: &[u8]) -> PauliOperator {
    PauliOperator::from_letters(&letters.iter().map(|&l| Letter::from_index(l)).collect::<Vec<_>>())
}

fn anti_row(op: &PauliOperator, axis: Letter) -> BitVec {
    BitVec::from_bools((0..op.num_qubits()).map(|q| op.letter(q).anticommutes(axis)))
}

/// Random keys per (qubit, letter); the identity letter hashes to zero.
fn zobrist_table(n: usize) -> Vec<[u64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2b0b_u64);
    (0..n)
        .map(|_| [0, rng.next_u64(), rng.next_u64(), rng.next_u64()])
        .collect()
}

#[derive(Default)]
struct IdentityHasher(u64);

impl Hasher for IdentityHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ u64::from(b);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

#[derive(Default)]
struct LogSumExp {
    max: Option<f64>,
    scaled: f64,
}

impl LogSumExp {
    fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        match self.max {
            None => {
                self.max = Some(x);
                self.scaled = 1.0;
            }
            Some(m) if x > m => {
                self.scaled = self.scaled * (m - x).exp() + 1.0;
                self.max = Some(x);
            }
            Some(m) => self.scaled += (x - m).exp(),
        }
    }

    fn value(&self) -> f64 {
        self.max.map_or(f64::NEG_INFINITY, |m| m + self.scaled.ln())
    }
}
