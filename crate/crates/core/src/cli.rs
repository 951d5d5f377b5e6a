//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for configuration or usage errors, 2 for
//! runtime failures.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Algorithm, ConfigError, RangeSpec, ScenarioConfig};
use crate::engine::run;
use crate::error::{Error, Result};
use crate::report::{
    default_out_dir, emit_series_csv, emit_sweep_csv, figure_export, run_summary_csv, write_file,
    Figure, FigureOptions, RunManifest,
};
use crate::sweep::{sweep, SweepAxis, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "paiwca", version, about = "MANET clustering simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write its metric series.
    Run(RunArgs),
    /// Run a parameter sweep over several seeds.
    Sweep(SweepArgs),
    /// Produce the data behind one comparison figure.
    Figure(FigureArgs),
}

#[derive(Debug, Args, Default)]
pub struct ScenarioArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Extra `key=value` setting; may repeat.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Fixed transmission range for every node, in meters.
    #[arg(long)]
    pub range: Option<f64>,
    /// Accept values outside the usual parameter bounds.
    #[arg(long)]
    pub unsafe_bounds: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub axis: SweepAxis,
    /// Comma separated; `start:end:step` expands to a grid.
    #[arg(long)]
    pub values: String,
    /// Comma separated; `a:b` expands to every seed from a to b.
    #[arg(long)]
    pub seeds: String,
    /// Comma separated algorithm names (default: all).
    #[arg(long)]
    pub algorithms: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// clusters, connectivity, dominant, throughput, pdr or delay
    pub name: String,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long)]
    pub algorithms: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn list_error(key: &str, value: &str, reason: impl Into<String>) -> Error {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
    .into()
}

/// Parses `10,20,30` or `10:100:10`.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| list_error("values", item, e.to_string()))
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !(step > 0.0) {
                    return Err(list_error("values", item, "step must be positive"));
                }
                let n = ((b - a) / step + 1e-9).floor();
                for i in 0..=(n.max(-1.0) as i64) {
                    out.push(a + i as f64 * step);
                }
            }
            _ => return Err(list_error("values", item, "expected v or start:end:step")),
        }
    }
    if out.is_empty() {
        return Err(list_error("values", text, "empty list"));
    }
    Ok(out)
}

/// Parses `1,2,5` or `1:20`.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| list_error("seeds", item, e.to_string()))
        };
        match item.split_once(':') {
            None => out.push(num(item)?),
            Some((a, b)) => out.extend(num(a)?..=num(b)?),
        }
    }
    if out.is_empty() {
        return Err(list_error("seeds", text, "empty list"));
    }
    Ok(out)
}

pub fn parse_algorithms(text: Option<&str>) -> Result<Vec<Algorithm>> {
    let Some(text) = text else {
        return Ok(Algorithm::ALL.to_vec());
    };
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|e: String| list_error("algorithms", s, e))
        })
        .collect()
}

/// Defaults, then the file, then `--set` pairs, then dedicated flags.
pub fn resolve_config(
    args: &ScenarioArgs,
    seed: Option<u64>,
    algorithm: Option<Algorithm>,
) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    for pair in &args.set {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            Error::from(ConfigError::Syntax {
                line: 0,
                text: pair.clone(),
            })
        })?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(n) = args.nodes {
        cfg.node_count = n;
    }
    if let Some(r) = args.range {
        cfg.range = RangeSpec::Fixed(r);
    }
    if args.unsafe_bounds {
        cfg.unsafe_bounds = true;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(a) = algorithm {
        cfg.algorithm = a;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(out: &Option<PathBuf>) -> PathBuf {
    out.clone().unwrap_or_else(default_out_dir)
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = resolve_config(&args.scenario, args.seed, args.algorithm)?;
    let dir = out_dir(&args.out);
    let mut manifest = RunManifest::begin(&cfg);
    let output = run(&cfg)?;
    let series = dir.join("series.csv");
    let summary = dir.join("summary.csv");
    emit_series_csv(&output.series, &series)?;
    write_file(
        &summary,
        &run_summary_csv(std::slice::from_ref(&output.summary)),
    )?;
    manifest.outputs = vec![series.clone(), summary];
    manifest.finish();
    manifest.write(&dir.join("manifest.txt"))?;
    let s = &output.summary;
    println!(
        "{} seed {}: {} ticks, {} clusters at setup, {} head-set updates, pdr {:.4}, wrote {}",
        s.algorithm,
        s.seed,
        s.ticks,
        s.initial_clusters,
        s.dominant_set_updates,
        s.pdr,
        series.display()
    );
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let base = resolve_config(&args.scenario, None, None)?;
    let spec = SweepSpec {
        axis: args.axis,
        values: parse_values(&args.values)?,
        seeds: parse_seeds(&args.seeds)?,
        algorithms: parse_algorithms(args.algorithms.as_deref())?,
    };
    for &v in &spec.values {
        spec.axis.apply(&base, v).validate()?;
    }
    let dir = out_dir(&args.out);
    let mut manifest = RunManifest::begin(&base);
    let rows = sweep(&base, &spec)?;
    let path = dir.join(format!("sweep_{}.csv", spec.axis));
    emit_sweep_csv(&rows, &path)?;
    manifest.outputs.push(path.clone());
    manifest.finish();
    manifest.write(&dir.join(format!("sweep_{}.manifest", spec.axis)))?;
    println!("{} rows written to {}", rows.len(), path.display());
    Ok(())
}

fn cmd_figure(args: &FigureArgs) -> Result<()> {
    let figure: Figure = args.name.parse()?;
    let mut opts = FigureOptions {
        base: resolve_config(&args.scenario, None, None)?,
        ..FigureOptions::default()
    };
    if let Some(seeds) = &args.seeds {
        opts.seeds = parse_seeds(seeds)?;
    }
    opts.algorithms = parse_algorithms(args.algorithms.as_deref())?;
    let path = figure_export(figure, &opts, &out_dir(&args.out))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figure(a) => cmd_figure(a),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::UnknownFigure(_) | Error::InvalidParameter { .. } => 1,
        Error::RangeAboveMax { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
