//! `scg-tfd` command line: synthesize test signals, compute one
//! time-frequency distribution, or rank several against ground truth.
//!
//! Exit codes: 0 success, 2 usage, 3 validation, 4 I/O.

mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{load_run_config, merge_into, parse_band, RunConfig};
use output::Outputs;
use scg_tfd::eval::{compare_methods, compute_tfd, dominant_frequency, CompareConfig, ScoringMode};
use scg_tfd::io::{self, GridSidecar, TruthFile};
use scg_tfd::signal::decimate;
use scg_tfd::synth::{X1Config, X2Config};
use scg_tfd::tfd::resolution_report;
use scg_tfd::{ComparisonReport, Method, SampledSignal, TfdError};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Inputs faster than this are decimated towards `ANALYSIS_RATE_HZ` first.
const DECIMATE_ABOVE_HZ: f64 = 1000.0;
const ANALYSIS_RATE_HZ: f64 = 320.0;

const DEFAULT_COMPARE_METHODS: [Method; 4] =
    [Method::Stft, Method::Pct, Method::Wvd, Method::Spwvd];

#[derive(Parser)]
#[command(
    name = "scg-tfd",
    version,
    about = "Time-frequency analysis of cardiac vibration signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic signal (<id>.csv) and its ground truth (<id>.truth.json)
    Synth(SynthArgs),
    /// Compute one time-frequency distribution of a CSV or WAV signal
    Analyze(AnalyzeArgs),
    /// Rank estimators by IF accuracy and report dominant frequencies
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalId {
    X1,
    X2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scoring {
    Nearest,
    Dominant,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    id: SignalId,
    #[arg(long)]
    seed: Option<u64>,
    /// Linear signal-to-noise power ratio (x2 only)
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    duration: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[arg(long, value_parser = parse_method, default_value = "stft")]
    method: Method,
    /// Analysis band as lo:hi in Hz (PCT ridge band, aliasing check)
    #[arg(long, value_parser = parse_band)]
    band: Option<(f64, f64)>,
    /// PCT polynomial order
    #[arg(long)]
    order: Option<usize>,
    /// Also write a PGM heatmap
    #[arg(long)]
    pgm: bool,
    /// Heatmap in dB (floor -60 dB) instead of linear
    #[arg(long)]
    db: bool,
    /// Crop the heatmap above this frequency
    #[arg(long)]
    max_freq: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    input: PathBuf,
    /// Ground-truth JSON written by `synth`
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, value_parser = parse_method, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Ridge and dominant-frequency band as lo:hi in Hz
    #[arg(long, value_parser = parse_band)]
    band: Option<(f64, f64)>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum)]
    scoring: Option<Scoring>,
    #[command(flatten)]
    common: Common,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<TfdError> for CliError {
    fn from(e: TfdError) -> Self {
        match e {
            TfdError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn with_path(path: &Path) -> impl FnOnce(TfdError) -> CliError + '_ {
    move |e| match e {
        TfdError::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        other => CliError::Validation(format!("{}: {other}", path.display())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Analyze(a) => analyze(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scg-tfd: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn synth(args: SynthArgs) -> Result<(), CliError> {
    let run = load_run_config(args.common.config.as_deref())?;
    let seed = args.seed.or(run.seed);
    let (id, sig) = match args.id {
        SignalId::X1 => {
            let mut cfg: X1Config = merge_into(X1Config::default(), run.synth.as_ref())?;
            if let Some(r) = args.rate {
                cfg.sample_rate_hz = r;
            }
            if let Some(d) = args.duration {
                cfg.duration_s = d;
            }
            ("x1", cfg.generate()?)
        }
        SignalId::X2 => {
            let mut cfg: X2Config = merge_into(X2Config::default(), run.synth.as_ref())?;
            if let Some(r) = args.rate {
                cfg.sample_rate_hz = r;
            }
            if let Some(d) = args.duration {
                cfg.duration_s = d;
            }
            if let Some(s) = args.snr {
                cfg.snr = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            ("x2", cfg.generate()?)
        }
    };

    let mut out = Outputs::new(&args.common.out);
    out.add(
        format!("{id}.csv"),
        io::signal_to_csv(&sig.signal).into_bytes(),
    );
    out.add(
        format!("{id}.truth.json"),
        TruthFile::from_synthetic(&sig).to_json().into_bytes(),
    );
    let written = out.commit()?;
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

/// Read `path`, decimating fast recordings down to the analysis rate.
fn load_signal(path: &Path) -> Result<(SampledSignal, Option<usize>), CliError> {
    let x = io::read_signal(path).map_err(with_path(path))?;
    if x.sample_rate_hz() > DECIMATE_ABOVE_HZ {
        let factor = (x.sample_rate_hz() / ANALYSIS_RATE_HZ).round() as usize;
        Ok((decimate(&x, factor)?, Some(factor)))
    } else {
        Ok((x, None))
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "signal".into())
}

fn build_config(
    preset_id: &str,
    run: &RunConfig,
    band: Option<(f64, f64)>,
    order: Option<usize>,
) -> Result<CompareConfig, CliError> {
    let mut cfg = merge_into(CompareConfig::for_signal(preset_id), run.params.as_ref())?;
    if let Some(b) = band.or(run.band_hz) {
        cfg.band_hz = Some(b);
        cfg.pct.ridge_band_hz = Some(b);
    }
    if let Some(o) = order.or(run.order) {
        cfg.pct.order = o;
    }
    cfg.pct.validate()?;
    Ok(cfg)
}

fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let run = load_run_config(args.common.config.as_deref())?;
    let (x, factor) = load_signal(&args.input)?;
    let name = stem(&args.input);
    let cfg = build_config(&name, &run, args.band, args.order)?;

    let mut grid = compute_tfd(&x, args.method, &cfg)?;
    grid.meta.decimation_factor = factor;
    if let Some((_, hi)) = args.band.or(run.band_hz) {
        if hi > grid.meta.folding_hz {
            grid.meta.warnings.push(format!(
                "analysis band reaches {hi} Hz, above the {} Hz folding frequency",
                grid.meta.folding_hz
            ));
        }
    }

    let base = format!("{name}.{}", args.method);
    let mut sidecar = GridSidecar::of(&grid);
    let mut out = Outputs::new(&args.common.out);
    out.add(format!("{base}.csv"), io::grid_to_csv(&grid).into_bytes());
    if args.pgm || run.pgm.unwrap_or(false) {
        let db = args.db || run.db.unwrap_or(false);
        let (bytes, scale) = io::render_pgm(&grid, db, args.max_freq);
        sidecar.pgm_scale = serde_json::to_value(scale)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned));
        out.add(format!("{base}.pgm"), bytes);
    }
    out.add(format!("{base}.json"), to_json(&sidecar));
    out.commit()?;

    let res = resolution_report(&grid)?;
    let dominant = dominant_frequency(&grid, cfg.band_hz)?;
    println!(
        "{}: {} x {} grid, dominant {dominant:.2} Hz, {:.3} ms / {:.4} Hz",
        args.method,
        grid.n_times(),
        grid.n_freqs(),
        res.temporal_resolution_ms,
        res.spectral_resolution_hz
    );
    for w in &grid.meta.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareOutput<'a> {
    input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimation_factor: Option<usize>,
    #[serde(flatten)]
    report: &'a ComparisonReport,
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let run = load_run_config(args.common.config.as_deref())?;
    let (x, factor) = load_signal(&args.input)?;

    let truth = match &args.truth {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let file = TruthFile::from_json(&text).map_err(with_path(path))?;
            file.validate_against(&x).map_err(with_path(path))?;
            Some(file)
        }
        None => None,
    };
    let signal_id = truth
        .as_ref()
        .map(|t| t.signal_id.clone())
        .unwrap_or_else(|| stem(&args.input));
    let mut cfg = build_config(&signal_id, &run, args.band, args.order)?;
    if let Some(s) = args.scoring {
        cfg.scoring = match s {
            Scoring::Nearest => ScoringMode::Nearest,
            Scoring::Dominant => ScoringMode::Dominant,
        };
    }
    let methods = args
        .methods
        .or(run.methods)
        .unwrap_or_else(|| DEFAULT_COMPARE_METHODS.to_vec());
    let gt = truth.as_ref().map(TruthFile::to_ground_truth).transpose()?;

    let report = compare_methods(&signal_id, &x, gt.as_ref(), &methods, &cfg)?;
    let table = report.to_table();
    let mut out = Outputs::new(&args.common.out);
    out.add(
        "report.json",
        to_json(&CompareOutput {
            input: args.input.display().to_string(),
            decimation_factor: factor,
            report: &report,
        }),
    );
    out.add("report.txt", table.clone().into_bytes());
    out.commit()?;
    print!("{table}");
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s.into_bytes()
}
