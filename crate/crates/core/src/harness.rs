//! Seeded Monte-Carlo failure-rate estimation, sweeps and threshold crossings.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::{Family, StabilizerCode};
use crate::decode::{
    analytic_pf_pure, ewd_decode_prepared, exact_mld_decode_prepared, syndrome, DecodeResult, DecoderConfig,
    LogicalClass, PreparedCode, EXACT_QUBIT_CAP,
};
use crate::error::{Error, Result};
use crate::noise::{make_noise, sample_chain, Bias, NoiseParams};
use crate::pauli::Letter;
use crate::rng::{substream, Purpose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Ewd,
    Exact,
    Analytic,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Ewd => "ewd",
            DecoderKind::Exact => "exact",
            DecoderKind::Analytic => "analytic",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ewd" => Ok(DecoderKind::Ewd),
            "exact" => Ok(DecoderKind::Exact),
            "analytic" => Ok(DecoderKind::Analytic),
            other => Err(Error::Parse(format!("unknown decoder {other:?}; expected ewd, exact or analytic"))),
        }
    }
}

/// Decoder choice with optional EWD overrides; unset fields take the
/// [`DecoderConfig`] defaults for each code and noise point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSpec {
    pub kind: DecoderKind,
    pub p_sample: Option<f64>,
    /// Steps per class as a multiple of the qubit count.
    pub steps_per_qubit: Option<usize>,
    /// Absolute step count; overrides `steps_per_qubit`.
    pub steps_per_class: Option<usize>,
    pub burn_in: Option<usize>,
    pub unique_chain_cap: Option<usize>,
}

impl DecoderSpec {
    pub fn new(kind: DecoderKind) -> Self {
        Self {
            kind,
            p_sample: None,
            steps_per_qubit: None,
            steps_per_class: None,
            burn_in: None,
            unique_chain_cap: None,
        }
    }

    pub fn ewd_config(&self, n: usize, noise: &NoiseParams) -> Result<DecoderConfig> {
        let mut cfg = DecoderConfig::new(n, noise, self.p_sample)?;
        if let Some(k) = self.steps_per_qubit {
            cfg.steps_per_class = k * n;
        }
        if let Some(s) = self.steps_per_class {
            cfg.steps_per_class = s;
        }
        if let Some(b) = self.burn_in {
            cfg.burn_in = b;
        }
        if let Some(c) = self.unique_chain_cap {
            cfg.unique_chain_cap = c;
        }
        if cfg.burn_in > cfg.steps_per_class {
            return Err(Error::Parameter(format!(
                "burn_in ({}) exceeds steps_per_class ({})",
                cfg.burn_in, cfg.steps_per_class
            )));
        }
        if cfg.unique_chain_cap == 0 {
            return Err(Error::Parameter("unique_chain_cap must be at least 1".into()));
        }
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub family: Family,
    pub distances: Vec<usize>,
    pub p: Vec<f64>,
    pub eta: Bias,
    pub axis: Letter,
    pub decoder: DecoderSpec,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.distances.is_empty() || self.p.is_empty() {
            return Err(Error::Parameter("an experiment needs at least one distance and one p".into()));
        }
        for &p in &self.p {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Parameter(format!("p values must lie in [0, 1), got {p}")));
            }
        }
        for &d in &self.distances {
            crate::code::check_distance(d)?;
            let n = self.family.build(d)?.num_qubits();
            if self.decoder.kind == DecoderKind::Exact && n > EXACT_QUBIT_CAP {
                return Err(Error::Capability(format!(
                    "exact decoder needs n <= {EXACT_QUBIT_CAP}, but {} at d={d} has n={n}",
                    self.family
                )));
            }
        }
        if self.decoder.kind == DecoderKind::Analytic && self.eta != Bias::Infinite {
            return Err(Error::Parameter("the analytic decoder needs pure noise (eta = inf)".into()));
        }
        Ok(())
    }

    /// `(point index, d, p)` in d-major order.
    pub fn points(&self) -> Vec<(u64, usize, f64)> {
        self.distances
            .iter()
            .flat_map(|&d| self.p.iter().map(move |&p| (d, p)))
            .enumerate()
            .map(|(i, (d, p))| (i as u64, d, p))
            .collect()
    }
}

/// Decoder diagnostics summed over the trials of a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsTotal {
    pub proposals: u64,
    pub accepted: u64,
    pub unique_chains: u64,
    /// Class walks whose distinct-chain store filled up.
    pub saturated_walks: u64,
    /// Trials where several classes shared the best score.
    pub ties: u64,
}

impl DiagnosticsTotal {
    fn add(mut self, o: Self) -> Self {
        self.proposals += o.proposals;
        self.accepted += o.accepted;
        self.unique_chains += o.unique_chains;
        self.saturated_walks += o.saturated_walks;
        self.ties += o.ties;
        self
    }
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub p: f64,
    pub eta: String,
    pub axis: Letter,
    pub decoder: DecoderKind,
    pub p_sample: Option<f64>,
    pub trials: u64,
    pub failures: u64,
    pub pf: f64,
    pub stderr: f64,
    pub seed: u64,
    #[serde(skip)]
    pub diagnostics: DiagnosticsTotal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub points: Vec<PointResult>,
    /// SHA-256 of each code's text form, by distance.
    pub code_checksums: Vec<(usize, String)>,
}

pub const CSV_HEADER: &str = "family,d,n,p,eta,axis,decoder,p_sample,trials,failures,pf,stderr,seed";

pub fn code_checksum(code: &StabilizerCode) -> String {
    Sha256::digest(code.to_text().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Monte-Carlo failure rate at one point, using substreams keyed by
/// `(master_seed, point, trial)`. Runs on the current rayon pool.
pub fn run_trials(
    code: &StabilizerCode,
    noise: &NoiseParams,
    decoder: &DecoderSpec,
    trials: u64,
    master_seed: u64,
) -> Result<PointResult> {
    run_point(code, noise, decoder, trials, master_seed, 0)
}

pub fn run_point(
    code: &StabilizerCode,
    noise: &NoiseParams,
    decoder: &DecoderSpec,
    trials: u64,
    master_seed: u64,
    point: u64,
) -> Result<PointResult> {
    let n = code.num_qubits();
    let mut row = PointResult {
        family: code.family(),
        d: code.distance_parameter(),
        n,
        p: noise.p,
        eta: noise.eta.to_string(),
        axis: noise.axis,
        decoder: decoder.kind,
        p_sample: None,
        trials,
        failures: 0,
        pf: 0.0,
        stderr: 0.0,
        seed: master_seed,
        diagnostics: DiagnosticsTotal::default(),
    };
    if decoder.kind == DecoderKind::Analytic {
        if noise.eta != Bias::Infinite {
            return Err(Error::Parameter("the analytic decoder needs pure noise (eta = inf)".into()));
        }
        row.trials = 0;
        row.pf = analytic_pf_pure(code.family(), code.distance_parameter(), noise.p, noise.axis)?;
        return Ok(row);
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    if decoder.kind == DecoderKind::Exact && n > EXACT_QUBIT_CAP {
        return Err(Error::Capability(format!(
            "exact decoder needs n <= {EXACT_QUBIT_CAP}, code has n={n}"
        )));
    }
    let prepared = PreparedCode::new(code)?;
    let cfg = match decoder.kind {
        DecoderKind::Ewd => {
            let cfg = decoder.ewd_config(n, noise)?;
            row.p_sample = Some(cfg.p_sample());
            Some(cfg)
        }
        _ => None,
    };

    let outcomes: Vec<(bool, DiagnosticsTotal)> = (0..trials)
        .into_par_iter()
        .map(|t| trial(&prepared, noise, cfg.as_ref(), master_seed, point, t))
        .collect::<Result<_>>()?;
    let (failures, diag) = outcomes.iter().fold((0u64, DiagnosticsTotal::default()), |(f, d), &(fail, dd)| {
        (f + u64::from(fail), d.add(dd))
    });
    row.failures = failures;
    row.pf = failures as f64 / trials as f64;
    row.stderr = (row.pf * (1.0 - row.pf) / trials as f64).sqrt();
    row.diagnostics = diag;
    Ok(row)
}

fn trial(
    prepared: &PreparedCode,
    noise: &NoiseParams,
    cfg: Option<&DecoderConfig>,
    seed: u64,
    point: u64,
    t: u64,
) -> Result<(bool, DiagnosticsTotal)> {
    let code = prepared.code();
    let error = sample_chain(noise, code.num_qubits(), &mut substream(seed, point, t, Purpose::Noise));
    let s = syndrome(code, &error)?;
    let result = match cfg {
        Some(cfg) => {
            let mut rng = substream(seed, point, t, Purpose::Decoder);
            ewd_decode_prepared(prepared, &s, noise, cfg, &mut rng)?
        }
        None => exact_mld_decode_prepared(prepared, &s, noise)?,
    };
    let truth = crate::decode::logical_class(code, &error, &prepared.pure_error(&s)?)?;
    let (guess, tied) = resolve_ties(&result, &mut substream(seed, point, t, Purpose::TieBreak));
    let diag = DiagnosticsTotal {
        proposals: result.diagnostics.proposals,
        accepted: result.diagnostics.accepted,
        unique_chains: result.diagnostics.unique_chains.iter().sum(),
        saturated_walks: result.diagnostics.saturated.iter().filter(|&&s| s).count() as u64,
        ties: u64::from(tied),
    };
    Ok((guess != truth, diag))
}

/// The decoder's class, or a uniform pick among classes tied for the best
/// score.
fn resolve_ties(result: &DecodeResult, rng: &mut impl RngCore) -> (LogicalClass, bool) {
    let tied = result.tied_classes();
    if tied.len() <= 1 {
        return (result.chosen, false);
    }
    (tied[rng.gen_range(0..tied.len())], true)
}

/// Runs every `(d, p)` point of `spec` on a pool of `workers` threads.
pub fn sweep(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentResult> {
    spec.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let mut points = Vec::new();
        let mut code_checksums = Vec::new();
        for &d in &spec.distances {
            let code = spec.family.build(d)?;
            code_checksums.push((d, code_checksum(&code)));
            for (index, pd, p) in spec.points() {
                if pd != d {
                    continue;
                }
                let noise = make_noise(p, spec.eta, spec.axis)?;
                points.push(run_point(&code, &noise, &spec.decoder, spec.trials, spec.master_seed, index)?);
            }
        }
        Ok(ExperimentResult {
            spec: spec.clone(),
            points,
            code_checksums,
        })
    })
}

pub fn write_csv(points: &[PointResult], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(points: &[PointResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(points, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_csv(input: impl Read) -> Result<Vec<PointResult>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header {:?}", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Provenance sidecar: the spec, run settings, code checksums and per-point
/// diagnostics.
pub fn sidecar_json(result: &ExperimentResult, workers: usize) -> serde_json::Value {
    serde_json::json!({
        "spec": result.spec,
        "workers": workers,
        "csv_header": CSV_HEADER,
        "code_checksums": result.code_checksums.iter()
            .map(|(d, c)| serde_json::json!({"d": d, "sha256": c}))
            .collect::<Vec<_>>(),
        "diagnostics": result.points.iter()
            .map(|p| serde_json::json!({"d": p.d, "p": p.p, "totals": p.diagnostics}))
            .collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub p_th: f64,
    pub interval: (f64, f64),
    pub d_small: usize,
    pub d_large: usize,
}

/// Crossing of the `d_large` and `d_small` failure curves: the first grid
/// cell where `pf(d_large) - pf(d_small)` goes from negative to nonnegative,
/// interpolated linearly. The interval is that cell widened on both sides by
/// the combined standard error divided by the slope of the difference.
pub fn estimate_threshold(points: &[PointResult], d_small: usize, d_large: usize) -> Result<Threshold> {
    let curve = |d: usize| -> Vec<&PointResult> {
        let mut c: Vec<&PointResult> = points.iter().filter(|r| r.d == d).collect();
        c.sort_by(|a, b| a.p.total_cmp(&b.p));
        c
    };
    let (small, large) = (curve(d_small), curve(d_large));
    let mut grid = Vec::new();
    for s in &small {
        if let Some(l) = large.iter().find(|l| l.p == s.p) {
            grid.push((s.p, l.pf - s.pf, (s.stderr.powi(2) + l.stderr.powi(2)).sqrt()));
        }
    }
    if grid.len() < 2 {
        return Err(Error::NotBracketed(format!(
            "d={d_small} and d={d_large} share fewer than two p values"
        )));
    }
    for w in grid.windows(2) {
        let ((p0, f0, s0), (p1, f1, s1)) = (w[0], w[1]);
        if !(f0 < 0.0 && f1 >= 0.0) {
            continue;
        }
        let p_th = if f1 == 0.0 { p1 } else { p0 + (p1 - p0) * (-f0) / (f1 - f0) };
        let slope = (f1 - f0) / (p1 - p0);
        let widen = s0.max(s1) / slope;
        return Ok(Threshold {
            p_th,
            interval: ((p0 - widen).max(0.0), p1 + widen),
            d_small,
            d_large,
        });
    }
    Err(Error::NotBracketed(format!(
        "pf(d={d_large}) - pf(d={d_small}) never changes sign from negative to nonnegative on the grid"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_xyz2, relabel_letters};

    fn row(d: usize, p: f64, pf: f64, stderr: f64) -> PointResult {
        PointResult {
            family: Family::Xyz2,
            d,
            n: 2 * d * d,
            p,
            eta: "0.5".into(),
            axis: Letter::Z,
            decoder: DecoderKind::Ewd,
            p_sample: Some(p),
            trials: 100,
            failures: 0,
            pf,
            stderr,
            seed: 0,
            diagnostics: DiagnosticsTotal::default(),
        }
    }

    #[test]
    fn zero_rate_never_fails() {
        let code = build_xyz2(3).unwrap();
        let noise = NoiseParams::depolarizing(0.0).unwrap();
        for kind in [DecoderKind::Exact, DecoderKind::Ewd] {
            let r = run_trials(&code, &noise, &DecoderSpec::new(kind), 50, 1).unwrap();
            assert_eq!((r.failures, r.pf, r.stderr), (0, 0.0, 0.0));
        }
    }

    #[test]
    fn stderr_formula() {
        let code = build_xyz2(3).unwrap();
        let noise = NoiseParams::depolarizing(0.25).unwrap();
        let r = run_trials(&code, &noise, &DecoderSpec::new(DecoderKind::Exact), 400, 9).unwrap();
        assert_eq!(r.pf, r.failures as f64 / 400.0);
        assert!((r.stderr - (r.pf * (1.0 - r.pf) / 400.0).sqrt()).abs() < 1e-15);
        assert!(r.failures > 0 && r.failures < 400);
    }

    #[test]
    fn exact_cap_is_a_capability_error() {
        let spec = ExperimentSpec {
            name: "t".into(),
            family: Family::Xyz2,
            distances: vec![5],
            p: vec![0.1],
            eta: Bias::DEPOLARIZING,
            axis: Letter::Z,
            decoder: DecoderSpec::new(DecoderKind::Exact),
            trials: 10,
            master_seed: 0,
        };
        let e = sweep(&spec, 1).unwrap_err();
        assert!(matches!(e, Error::Capability(_)));
        assert!(e.to_string().contains("n <= 20"), "{e}");
    }

    #[test]
    fn relabeled_code_and_noise_give_identical_counts() {
        // Swapping Z and Y in the code, the noise and (through the sampler)
        // the chains is an isomorphism of the whole run. The exact decoder
        // does not depend on which coset element it starts from, so the
        // failure counts match exactly.
        let code = build_xyz2(3).unwrap();
        let swapped = relabel_letters(&code, [Letter::X, Letter::Z, Letter::Y]).unwrap();
        let z = make_noise(0.2, Bias::Finite(10.0), Letter::Z).unwrap();
        let y = make_noise(0.2, Bias::Finite(10.0), Letter::Y).unwrap();
        let spec = DecoderSpec::new(DecoderKind::Exact);
        let a = run_trials(&code, &z, &spec, 500, 77).unwrap();
        let b = run_trials(&swapped, &y, &spec, 500, 77).unwrap();
        assert_eq!(a.failures, b.failures);
    }

    #[test]
    fn xyz2_z_and_y_bias_agree_statistically() {
        let code = build_xyz2(3).unwrap();
        let spec = DecoderSpec::new(DecoderKind::Exact);
        let z = run_trials(&code, &make_noise(0.25, Bias::Finite(10.0), Letter::Z).unwrap(), &spec, 3000, 5).unwrap();
        let y = run_trials(&code, &make_noise(0.25, Bias::Finite(10.0), Letter::Y).unwrap(), &spec, 3000, 6).unwrap();
        let sigma = (z.stderr.powi(2) + y.stderr.powi(2)).sqrt();
        assert!((z.pf - y.pf).abs() < 3.0 * sigma, "{} vs {}", z.pf, y.pf);
    }

    #[test]
    fn threshold_interpolates() {
        let pts = vec![
            row(3, 0.1, 0.10, 0.0),
            row(5, 0.1, 0.05, 0.0),
            row(3, 0.2, 0.20, 0.0),
            row(5, 0.2, 0.25, 0.0),
        ];
        let t = estimate_threshold(&pts, 3, 5).unwrap();
        assert!((t.p_th - 0.15).abs() < 1e-12);
        assert_eq!(t.interval, (0.1, 0.2));
    }

    #[test]
    fn threshold_widens_with_errors() {
        let pts = vec![
            row(3, 0.1, 0.10, 0.01),
            row(5, 0.1, 0.05, 0.01),
            row(3, 0.2, 0.20, 0.01),
            row(5, 0.2, 0.25, 0.01),
        ];
        let t = estimate_threshold(&pts, 3, 5).unwrap();
        let widen = 2f64.sqrt() * 0.01;
        assert!((t.interval.0 - (0.1 - widen)).abs() < 1e-12);
        assert!((t.interval.1 - (0.2 + widen)).abs() < 1e-12);
    }

    #[test]
    fn threshold_not_bracketed() {
        let pts = vec![
            row(3, 0.1, 0.10, 0.0),
            row(5, 0.1, 0.05, 0.0),
            row(3, 0.2, 0.20, 0.0),
            row(5, 0.2, 0.15, 0.0),
        ];
        assert!(matches!(estimate_threshold(&pts, 3, 5), Err(Error::NotBracketed(_))));
        assert!(matches!(estimate_threshold(&pts[..2], 3, 5), Err(Error::NotBracketed(_))));
    }

    #[test]
    fn csv_round_trip() {
        let mut pts = vec![row(3, 0.12, 0.5, 0.05), row(5, 0.12, 0.25, 0.04)];
        pts[1].p_sample = None;
        pts[1].eta = "inf".into();
        let text = csv_string(&pts).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains(",inf,Z,ewd,,100,"), "{text}");
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, pts);
    }
}
