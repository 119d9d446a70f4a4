//! Experiment driver: builds mutual-information curves and objectivity
//! reports for the GHZ-plus-junk and imperfect-CNOT environment models,
//! and cross-validates every closed form against the statevector oracle.
//!
//! Exit codes: 0 success, 1 computation or validation failure, 2 usage
//! error. `QDARWIN_THREADS` caps the worker pool (0 or unset = automatic).
//! All randomized output is reproducible from the printed seed and does
//! not depend on the thread count.

mod validate;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qdarwin_core::{
    averaged_accessible_curve, averaged_curve, biased_accessible_curve, consensus_from_curve,
    ghz_junk_overlaps, redundancy_ghz_junk, redundancy_mean, scenario_curve, AverageStrategy,
    BiasMode, DrawPlan, GhzJunkConfig, MiCurve, ObjectivityReport, PDistribution, PVector,
    RedundancyKind, ScenarioOrdering,
};

#[derive(Parser)]
#[command(
    name = "qdarwin",
    about = "Objectivity curves and consensus/redundancy reports for two-branch states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Averaged or scenario curves for an environment of perfectly
    /// correlated plus junk qubits.
    GhzJunk(GhzJunkArgs),
    /// Accessible-information curves for randomly drawn imperfect-CNOT
    /// environments.
    Icnot(IcnotArgs),
    /// Cross-check the closed forms against the statevector oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GhzMode {
    Averaged,
    ScenarioA,
    ScenarioB,
    ScenarioC,
}

#[derive(Args)]
struct GhzJunkArgs {
    /// JSON config file; explicit flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Environment size N.
    #[arg(long)]
    n: Option<usize>,
    /// Number of correlated qubits m.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<GhzMode>,
    /// Consensus threshold as a fraction of the system entropy.
    #[arg(long)]
    threshold: Option<f64>,
    /// Emit every stride-th fraction size (endpoints always included).
    #[arg(long)]
    stride: Option<usize>,
    /// Curve CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an objectivity report; optional path defaults next to the CSV.
    #[arg(long)]
    report: Option<Option<PathBuf>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GhzJunkFileConfig {
    n: Option<usize>,
    m: Option<usize>,
    mode: Option<String>,
    threshold: Option<f64>,
    stride: Option<usize>,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistKind {
    Flat,
    Exp,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IcnotMode {
    Averaged,
    Max,
    Min,
}

#[derive(Args)]
struct IcnotArgs {
    /// JSON config file; explicit flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Environment size N.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    dist: Option<DistKind>,
    /// Rate of the truncated-exponential distribution.
    #[arg(long)]
    rate: Option<f64>,
    /// Number of fresh extractions to average over.
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed; generated and printed to stderr when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<IcnotMode>,
    /// Plain-text file of flip probabilities, one per line (fixed dist).
    #[arg(long)]
    p_file: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an objectivity report; optional path defaults next to the CSV.
    #[arg(long)]
    report: Option<Option<PathBuf>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IcnotFileConfig {
    n: Option<usize>,
    dist: Option<String>,
    rate: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    mode: Option<String>,
    p_file: Option<PathBuf>,
    threshold: Option<f64>,
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Largest environment size the oracle checks cover.
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Randomized cases per check.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 20_24)]
    seed: u64,
}

/// Usage problems detected after clap parsing (missing or inconsistent
/// flag/config combinations).
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GhzJunk(args) => cmd_ghz_junk(args),
        Command::Icnot(args) => cmd_icnot(args),
        Command::Validate(args) => validate::cmd_validate(args.n_max, args.cases, args.seed),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            if err.is::<UsageError>() {
                eprintln!("usage error: {err}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("QDARWIN_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                // Ignore failure: the pool may already exist under test
                // harnesses, and determinism does not depend on it.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            Err(_) => eprintln!("ignoring unparsable QDARWIN_THREADS={raw:?}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn load_config<T: for<'de> Deserialize<'de> + Default>(
    path: &Option<PathBuf>,
) -> anyhow::Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))
        }
    }
}

/// A bare `--report` flag derives the path from the CSV name.
fn report_path(report: &Option<Option<PathBuf>>, out: &Path) -> Option<PathBuf> {
    report.as_ref().map(|p| {
        p.clone()
            .unwrap_or_else(|| out.with_extension("report.json"))
    })
}

fn write_outputs(
    out: &Path,
    curve: &MiCurve,
    report: Option<(&Path, &ObjectivityReport)>,
) -> anyhow::Result<()> {
    std::fs::write(out, curve.to_csv()).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {}", out.display());
    if let Some((path, report)) = report {
        let mut json = serde_json::to_string_pretty(report)?;
        json.push('\n');
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_ghz_junk(args: GhzJunkArgs) -> anyhow::Result<ExitCode> {
    let file: GhzJunkFileConfig = load_config(&args.config)?;
    let n = args.n.or(file.n).ok_or_else(|| usage("--n is required"))?;
    let m = args.m.or(file.m).ok_or_else(|| usage("--m is required"))?;
    let mode = match args.mode {
        Some(m) => m,
        None => match file.mode.as_deref() {
            None => return Err(usage("--mode is required")),
            Some("averaged") => GhzMode::Averaged,
            Some("scenario-a") => GhzMode::ScenarioA,
            Some("scenario-b") => GhzMode::ScenarioB,
            Some("scenario-c") => GhzMode::ScenarioC,
            Some(other) => return Err(usage(format!("unknown mode {other:?} in config"))),
        },
    };
    let threshold = args.threshold.or(file.threshold).unwrap_or(0.99);
    let stride = args.stride.or(file.stride).unwrap_or(1);
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("ghz_junk.csv"));

    let cfg = GhzJunkConfig::new(n, m).map_err(|e| usage(e.to_string()))?;
    let curve = match mode {
        GhzMode::Averaged => {
            let ov = ghz_junk_overlaps(cfg);
            averaged_curve(
                &ov,
                AverageStrategy::Auto {
                    samples: 0,
                    seed: 0,
                },
                stride,
            )?
        }
        GhzMode::ScenarioA => scenario_curve(cfg, &ScenarioOrdering::scenario_a(cfg))?,
        GhzMode::ScenarioB => scenario_curve(cfg, &ScenarioOrdering::scenario_b(cfg))?,
        GhzMode::ScenarioC => {
            let ordering = ScenarioOrdering::scenario_c(cfg).map_err(|e| usage(e.to_string()))?;
            scenario_curve(cfg, &ordering)?
        }
    };

    let report = match report_path(&args.report, &out) {
        None => None,
        Some(path) => {
            let crossing = consensus_from_curve(&curve, threshold)?;
            Some((
                path,
                ObjectivityReport {
                    model: "ghz_junk".into(),
                    n,
                    m: Some(m),
                    distribution: None,
                    threshold,
                    f0: crossing.f0,
                    consensus: crossing.consensus,
                    redundancy: redundancy_ghz_junk(cfg) as u64,
                    redundancy_kind: RedundancyKind::Exact,
                    seed: None,
                    n_draws: None,
                    system_entropy_nats: curve.system_entropy_nats,
                },
            ))
        }
    };
    write_outputs(&out, &curve, report.as_ref().map(|(p, r)| (p.as_path(), r)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_icnot(args: IcnotArgs) -> anyhow::Result<ExitCode> {
    let file: IcnotFileConfig = load_config(&args.config)?;
    let n = args.n.or(file.n).ok_or_else(|| usage("--n is required"))?;
    let dist_kind = match args.dist {
        Some(d) => d,
        None => match file.dist.as_deref() {
            None => return Err(usage("--dist is required")),
            Some("flat") => DistKind::Flat,
            Some("exp") => DistKind::Exp,
            Some("fixed") => DistKind::Fixed,
            Some(other) => return Err(usage(format!("unknown dist {other:?} in config"))),
        },
    };
    let mode = match args.mode {
        Some(m) => m,
        None => match file.mode.as_deref() {
            None => return Err(usage("--mode is required")),
            Some("averaged") => IcnotMode::Averaged,
            Some("max") => IcnotMode::Max,
            Some("min") => IcnotMode::Min,
            Some(other) => return Err(usage(format!("unknown mode {other:?} in config"))),
        },
    };
    let samples = args.samples.or(file.samples).unwrap_or(10_000);
    let threshold = args.threshold.or(file.threshold).unwrap_or(0.99);
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("icnot.csv"));
    let p_file = args.p_file.or(file.p_file);

    let dist = match dist_kind {
        DistKind::Flat => PDistribution::Flat,
        DistKind::Exp => {
            let rate = args.rate.or(file.rate).unwrap_or(5.0);
            PDistribution::exponential(rate).map_err(|e| usage(e.to_string()))?
        }
        DistKind::Fixed => {
            let path = p_file.ok_or_else(|| usage("--dist fixed needs --p-file"))?;
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let values = PVector::from_plain_text(&text)?;
            if values.len() != n {
                return Err(usage(format!(
                    "{} holds {} probabilities but --n is {n}",
                    path.display(),
                    values.len()
                )));
            }
            PDistribution::Fixed(values)
        }
    };

    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => {
            let s: u64 = rand::random();
            eprintln!("generated seed: {s}");
            s
        }
    };
    let plan = DrawPlan::new(samples, seed)?;

    let curve = match mode {
        IcnotMode::Averaged => averaged_accessible_curve(&dist, n, plan)?,
        IcnotMode::Max => biased_accessible_curve(&dist, n, plan, BiasMode::Max)?,
        IcnotMode::Min => biased_accessible_curve(&dist, n, plan, BiasMode::Min)?,
    };

    let report = match report_path(&args.report, &out) {
        None => None,
        Some(path) => {
            let crossing = consensus_from_curve(&curve, threshold)?;
            let (mean_redundancy, _stderr) = redundancy_mean(&dist, n, plan, threshold)?;
            Some((
                path,
                ObjectivityReport {
                    model: "icnot".into(),
                    n,
                    m: None,
                    distribution: Some(dist.label()),
                    threshold,
                    f0: crossing.f0,
                    consensus: crossing.consensus,
                    redundancy: mean_redundancy.round() as u64,
                    redundancy_kind: RedundancyKind::GreedyLowerBound,
                    seed: Some(seed),
                    n_draws: Some(samples as u64),
                    system_entropy_nats: curve.system_entropy_nats,
                },
            ))
        }
    };
    write_outputs(&out, &curve, report.as_ref().map(|(p, r)| (p.as_path(), r)))?;
    Ok(ExitCode::SUCCESS)
}
