//! TOML experiment configuration.
//!
//! ```toml
//! seed = 2024
//! workers = 4
//!
//! [sweep.depolarizing]
//! family = "xyz2"
//! distances = [3, 5]
//! p_range = [0.12, 0.24, 0.02]   # or: p = [0.12, 0.14]
//! eta = 0.5                      # or "inf"
//! axis = "Z"
//! decoder = "ewd"
//! p_sample = 0.3
//! trials = 10000
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::Family;
use crate::error::{Error, Result};
use crate::harness::{DecoderKind, DecoderSpec, ExperimentSpec};
use crate::noise::Bias;
use crate::pauli::Letter;

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub sweep: BTreeMap<String, SweepConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaValue {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: String,
    pub distances: Vec<usize>,
    pub p: Option<Vec<f64>>,
    /// `[start, stop, step]`, stop included.
    pub p_range: Option<[f64; 3]>,
    pub eta: Option<EtaValue>,
    pub axis: Option<String>,
    pub decoder: Option<String>,
    pub p_sample: Option<f64>,
    pub steps_per_qubit: Option<usize>,
    pub steps_per_class: Option<usize>,
    pub burn_in: Option<usize>,
    pub unique_chain_cap: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

/// Parses a config file; syntax and field errors name the line.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
    if cfg.sweep.is_empty() {
        return Err(Error::Parse("config: no [sweep.<name>] sections".into()));
    }
    Ok(cfg)
}

/// Inclusive grid `start, start+step, ...` up to `stop`, rounded to 12
/// decimals so that `0.1 + 2·0.1` prints as `0.3`.
pub fn p_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(Error::Parameter(format!(
            "p range needs step > 0 and stop >= start, got [{start}, {stop}, {step}]"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

impl ConfigFile {
    /// One spec per sweep, in name order. Sweep-level seeds override the
    /// file seed, which overrides `default_seed`.
    pub fn specs(&self, default_seed: u64) -> Result<Vec<ExperimentSpec>> {
        self.sweep
            .iter()
            .map(|(name, s)| s.to_spec(name, s.seed.or(self.seed).unwrap_or(default_seed)))
            .collect()
    }
}

impl SweepConfig {
    pub fn to_spec(&self, name: &str, seed: u64) -> Result<ExperimentSpec> {
        let ctx = |e: Error| Error::Parse(format!("sweep {name:?}: {e}"));
        let family: Family = self.family.parse().map_err(ctx)?;
        let p = match (&self.p, &self.p_range) {
            (Some(p), None) => p.clone(),
            (None, Some([a, b, c])) => p_grid(*a, *b, *c).map_err(ctx)?,
            _ => return Err(ctx(Error::Parse("give exactly one of `p` or `p_range`".into()))),
        };
        let eta = match &self.eta {
            None => Bias::DEPOLARIZING,
            Some(EtaValue::Number(x)) if x.is_infinite() => Bias::Infinite,
            Some(EtaValue::Number(x)) => Bias::Finite(*x),
            Some(EtaValue::Text(t)) => t.parse().map_err(ctx)?,
        };
        let axis: Letter = match &self.axis {
            None => Letter::Z,
            Some(a) => a.parse().map_err(ctx)?,
        };
        if axis == Letter::I {
            return Err(ctx(Error::Parse("axis must be X, Y or Z".into())));
        }
        let kind: DecoderKind = match &self.decoder {
            None => DecoderKind::Ewd,
            Some(d) => d.parse().map_err(ctx)?,
        };
        Ok(ExperimentSpec {
            name: name.to_owned(),
            family,
            distances: self.distances.clone(),
            p,
            eta,
            axis,
            decoder: DecoderSpec {
                kind,
                p_sample: self.p_sample,
                steps_per_qubit: self.steps_per_qubit,
                steps_per_class: self.steps_per_class,
                burn_in: self.burn_in,
                unique_chain_cap: self.unique_chain_cap,
            },
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            master_seed: seed,
        })
    }
}
