use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xyz2::code::{validate_code, ValidationReport};
use xyz2::config::{p_grid, parse_config};
use xyz2::decode::{ewd_decode, exact_mld_decode, DecoderConfig, Syndrome};
use xyz2::harness::{
    csv_string, estimate_threshold, read_csv, sidecar_json, sweep, DecoderKind, PointResult,
};
use xyz2::rng::{substream, Purpose};
use xyz2::{Error, Family, Letter, NoiseParams, StabilizerCode};

const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_CAPABILITY: u8 = 4;

/// XYZ² and related stabilizer codes: construction, decoding and threshold
/// experiments.
#[derive(Parser, Debug)]
#[command(name = "xyz2", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master seed for all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per grid point; overrides config files.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// EWD sampling error rate.
    #[arg(long, global = true)]
    p_sample: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true, env = "XYZ2_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write it in text form with a validation summary.
    Build { family: String, d: usize },
    /// Validate a built-in code or a code file.
    Validate {
        family: Option<String>,
        d: Option<usize>,
        #[arg(long)]
        code: Option<PathBuf>,
        /// Also run exhaustive distance searches (small codes only).
        #[arg(long)]
        distances: bool,
    },
    /// Closed-form pure-noise failure rates.
    Analytic {
        #[arg(long, default_value = "xyz2")]
        family: String,
        /// Comma-separated distances.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        d: Vec<usize>,
        #[arg(long, default_value = "Z")]
        axis: String,
        /// Comma-separated error rates.
        #[arg(long, value_delimiter = ',', conflicts_with = "p_range")]
        p: Vec<f64>,
        /// `start:stop:step`, stop included.
        #[arg(long)]
        p_range: Option<String>,
    },
    /// Decode one syndrome and print the class scores as JSON.
    Decode {
        /// Code file; otherwise `--family` and `--d`.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long, default_value = "xyz2")]
        family: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// One 0/1 character per generator.
        #[arg(long)]
        syndrome: String,
        /// `p=<rate>,eta=<bias|inf>,axis=<X|Y|Z>`
        #[arg(long, default_value = "p=0.05")]
        noise: String,
        #[arg(long, default_value = "ewd")]
        decoder: String,
        #[arg(long)]
        steps_per_class: Option<usize>,
    },
    /// Run the sweeps of a TOML config and write the results table.
    Experiment { config: PathBuf },
    /// Crossing point of two failure curves in a results table.
    Threshold {
        results: PathBuf,
        #[arg(long, default_value_t = 3)]
        d_small: usize,
        #[arg(long, default_value_t = 5)]
        d_large: usize,
        /// Restrict to rows of one family when the table mixes several.
        #[arg(long)]
        family: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Validation(String),
    Capability(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capability(_) => Failure::Capability(e.to_string()),
            Error::Consistency(_) => Failure::Validation(e.to_string()),
            Error::Parameter(_)
            | Error::Parse(_)
            | Error::Dimension { .. }
            | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Validation(m) => (EXIT_VALIDATION, m),
                Failure::Capability(m) => (EXIT_CAPABILITY, m),
                Failure::Runtime(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    dispatch(&cli)?;
    match (&cli.command, &cli.global.out) {
        (Command::Experiment { .. }, _) | (_, None) => Ok(()),
        (_, Some(out)) => write_sidecar(out, serde_json::Value::Null),
    }
}

/// Records how an output file was made: the full command line, the crate
/// version, and whatever the command adds in `detail`.
fn write_sidecar(out: &Path, detail: serde_json::Value) -> Outcome {
    let sidecar = serde_json::json!({
        "argv": std::env::args().collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
        "detail": detail,
    });
    fs::write(sidecar_path(out), json_string(&sidecar))?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Build { family, d } => {
            let code = parse_family(family)?.build(*d)?;
            let report = validate_code(&code, false);
            emit(g, &code.to_text())?;
            let summary = report_text(&report);
            if g.out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
            check_report(&report)
        }
        Command::Validate {
            family,
            d,
            code,
            distances,
        } => {
            let code = load_code(code.as_deref(), family.as_deref(), *d)?;
            let report = validate_code(&code, *distances);
            let text = match g.format {
                Some(Format::Json) => json_string(&serde_json::to_value(&report).map_err(Error::from)?),
                _ => report_text(&report),
            };
            emit(g, &text)?;
            check_report(&report)
        }
        Command::Analytic {
            family,
            d,
            axis,
            p,
            p_range,
        } => {
            let family = parse_family(family)?;
            let axis: Letter = axis.parse()?;
            let grid = match p_range {
                Some(r) => parse_range(r)?,
                None if !p.is_empty() => p.clone(),
                None => return Err(Failure::Usage("give --p or --p-range".into())),
            };
            if let Some(&bad) = grid.iter().find(|&&x| !(0.0..=0.5).contains(&x)) {
                return Err(Failure::Usage(format!("analytic curves need p in [0, 0.5], got {bad}")));
            }
            let mut rows = Vec::new();
            for &dd in d {
                let code = family.build(dd)?;
                for &pp in &grid {
                    let noise = NoiseParams::pure(pp.min(0.999), axis)?;
                    let spec = xyz2::harness::DecoderSpec::new(DecoderKind::Analytic);
                    let mut row = xyz2::harness::run_trials(&code, &noise, &spec, 1, g.seed.unwrap_or(0))?;
                    row.p = pp;
                    rows.push(row);
                }
            }
            emit_rows(g, &rows)
        }
        Command::Decode {
            code,
            family,
            d,
            syndrome,
            noise,
            decoder,
            steps_per_class,
        } => {
            let code = load_code(code.as_deref(), Some(family), Some(*d))?;
            let s = Syndrome::parse(syndrome)?;
            if s.len() != code.num_generators() {
                return Err(Failure::Usage(format!(
                    "syndrome has {} bits, code has {} generators",
                    s.len(),
                    code.num_generators()
                )));
            }
            let noise: NoiseParams = noise.parse()?;
            let result = match decoder.parse::<DecoderKind>()? {
                DecoderKind::Exact => exact_mld_decode(&code, &s, &noise)?,
                DecoderKind::Ewd => {
                    let mut cfg = DecoderConfig::new(code.num_qubits(), &noise, g.p_sample)?;
                    if let Some(steps) = steps_per_class {
                        cfg.steps_per_class = *steps;
                        cfg.burn_in = cfg.burn_in.min(*steps);
                    }
                    let mut rng = substream(g.seed.unwrap_or(0), 0, 0, Purpose::Decoder);
                    ewd_decode(&code, &s, &noise, &cfg, &mut rng)?
                }
                DecoderKind::Analytic => {
                    return Err(Failure::Usage("the analytic model has no per-syndrome decoder".into()))
                }
            };
            emit(g, &json_string(&result.to_json()))
        }
        Command::Experiment { config } => {
            let text = fs::read_to_string(config)?;
            let cfg = parse_config(&text)?;
            let workers = g.workers.or(cfg.workers).unwrap_or(1);
            let mut specs = cfg.specs(0)?;
            for spec in &mut specs {
                if let Some(seed) = g.seed {
                    spec.master_seed = seed;
                }
                if let Some(t) = g.trials {
                    spec.trials = t;
                }
                if g.p_sample.is_some() {
                    spec.decoder.p_sample = g.p_sample;
                }
            }
            let mut rows = Vec::new();
            let mut sidecars = Vec::new();
            for spec in &specs {
                let result = sweep(spec, workers)?;
                sidecars.push(sidecar_json(&result, workers));
                rows.extend(result.points);
            }
            emit_rows(g, &rows)?;
            if let Some(out) = &g.out {
                let detail = serde_json::json!({
                    "config_file": config.display().to_string(),
                    "config": cfg,
                    "cli_overrides": {"seed": g.seed, "trials": g.trials, "p_sample": g.p_sample},
                    "sweeps": sidecars,
                });
                write_sidecar(out, detail)?;
            }
            Ok(())
        }
        Command::Threshold {
            results,
            d_small,
            d_large,
            family,
        } => {
            let mut rows = read_csv(fs::File::open(results)?)?;
            if let Some(f) = family {
                let f = parse_family(f)?;
                rows.retain(|r| r.family == f);
            }
            let t = estimate_threshold(&rows, *d_small, *d_large)?;
            let text = match g.format {
                Some(Format::Json) => json_string(&serde_json::to_value(t).map_err(Error::from)?),
                _ => format!(
                    "p_th = {:.4}  interval = [{:.4}, {:.4}]  (d = {} vs {})\n",
                    t.p_th, t.interval.0, t.interval.1, t.d_small, t.d_large
                ),
            };
            emit(g, &text)
        }
    }
}

fn parse_family(s: &str) -> Result<Family, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad --p-range {s:?}; expected start:stop:step")))?;
    match parts[..] {
        [a, b, c] => Ok(p_grid(a, b, c)?),
        _ => Err(Failure::Usage(format!("bad --p-range {s:?}; expected start:stop:step"))),
    }
}

fn load_code(path: Option<&Path>, family: Option<&str>, d: Option<usize>) -> Result<StabilizerCode, Failure> {
    match (path, family, d) {
        (Some(p), _, _) => Ok(StabilizerCode::parse_text(&fs::read_to_string(p)?)?),
        (None, Some(f), Some(d)) => Ok(parse_family(f)?.build(d)?),
        _ => Err(Failure::Usage("give a code file or a family and distance".into())),
    }
}

fn check_report(report: &ValidationReport) -> Outcome {
    if report.all_ok() {
        Ok(())
    } else {
        Err(Failure::Validation("code failed validation".into()))
    }
}

fn report_text(r: &ValidationReport) -> String {
    let flag = |ok: bool| if ok { "ok" } else { "FAILED" };
    let mut s = format!(
        "qubits {}  generators {}  rank {}\ncommutation      {}\nrank             {}\nsingle errors    {}\nlogicals         {}\n",
        r.num_qubits,
        r.num_generators,
        r.rank,
        flag(r.commutation_ok),
        flag(r.rank_ok),
        flag(r.single_error_detection_ok),
        flag(r.logical_ok),
    );
    if let Some(ok) = r.directionality_ok {
        s += &format!("directionality   {}\n", flag(ok));
    }
    if let Some(d) = r.distance_unrestricted {
        s += &format!("distance         {d}\n");
    }
    for (l, d) in &r.distance_pure {
        s += &format!("distance pure {l}  {d}\n");
    }
    for note in &r.notes {
        s += &format!("note: {note}\n");
    }
    s += &format!("overall          {}\n", flag(r.all_ok()));
    s
}

fn json_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn emit(g: &Global, text: &str) -> Outcome {
    match &g.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_rows(g: &Global, rows: &[PointResult]) -> Outcome {
    let text = match g.format {
        Some(Format::Json) => json_string(&serde_json::to_value(rows).map_err(Error::from)?),
        _ => csv_string(rows)?,
    };
    emit(g, &text)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}
