//! CSV output, run manifests and figure data.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value parses back to the exact same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::config::{Algorithm, ScenarioConfig};
use crate::engine::{MetricsRecord, RunSummary, Simulation};
use crate::error::{Error, Result};
use crate::sweep::{sweep, Stat, SweepAxis, SweepRow, SweepSpec};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PAIWCA_OUT_DIR";

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn series_csv(series: &[MetricsRecord]) -> String {
    let mut s = MetricsRecord::FIELDS.join(",");
    s.push('\n');
    for r in series {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.tick,
            r.cluster_count,
            r.connectivity,
            r.dominant_set_updates,
            r.sent,
            r.delivered,
            r.dropped,
            r.in_flight,
            r.throughput,
            r.mean_delay,
            r.alive_nodes
        );
    }
    s
}

pub const RUN_SUMMARY_FIELDS: [&str; 15] = [
    "algorithm",
    "seed",
    "ticks",
    "initial_clusters",
    "mean_clusters",
    "mean_connectivity",
    "dominant_set_updates",
    "sent",
    "delivered",
    "dropped",
    "in_flight",
    "pdr",
    "throughput",
    "mean_delay",
    "alive_nodes",
];

pub fn run_summary_csv(summaries: &[RunSummary]) -> String {
    let mut s = RUN_SUMMARY_FIELDS.join(",");
    s.push('\n');
    for r in summaries {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.seed,
            r.ticks,
            r.initial_clusters,
            r.mean_clusters,
            r.mean_connectivity,
            r.dominant_set_updates,
            r.sent,
            r.delivered,
            r.dropped,
            r.in_flight,
            r.pdr,
            r.throughput,
            r.mean_delay,
            r.alive_nodes
        );
    }
    s
}

/// One row per (algorithm, axis value), `<metric>_mean` and `<metric>_std` columns.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("algorithm,axis,value,runs");
    for m in SweepRow::METRICS {
        let _ = write!(s, ",{m}_mean,{m}_std");
    }
    s.push('\n');
    for r in rows {
        let _ = write!(s, "{},{},{},{}", r.algorithm, r.axis, r.value, r.runs);
        for m in SweepRow::METRICS {
            let st = r.metric(m).expect("listed metric");
            let _ = write!(s, ",{},{}", st.mean, st.std);
        }
        s.push('\n');
    }
    s
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_series_csv(series: &[MetricsRecord], path: &Path) -> Result<()> {
    write_file(path, &series_csv(series))
}

pub fn emit_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_file(path, &sweep_csv(rows))
}

pub fn config_hash(cfg: &ScenarioConfig) -> String {
    hex::encode(Sha256::digest(cfg.to_kv_string().as_bytes()))
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Provenance of one set of output files.
///
/// The text form puts the manifest fields in comments followed by the
/// resolved config, so a manifest can be fed back as a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub outputs: Vec<PathBuf>,
    pub config: ScenarioConfig,
}

impl RunManifest {
    pub fn begin(cfg: &ScenarioConfig) -> Self {
        Self {
            config_hash: config_hash(cfg),
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0.0,
            outputs: Vec::new(),
            config: cfg.clone(),
        }
    }

    pub fn finish(&mut self) {
        self.finished_unix = unix_now();
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# config_hash = {}", self.config_hash);
        let _ = writeln!(s, "# seed = {}", self.seed);
        let _ = writeln!(s, "# version = {}", self.version);
        let _ = writeln!(s, "# started_unix = {}", self.started_unix);
        let _ = writeln!(s, "# finished_unix = {}", self.finished_unix);
        for o in &self.outputs {
            let _ = writeln!(s, "# output = {}", o.display());
        }
        s.push_str(&self.config.to_kv_string());
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Clusters,
    Connectivity,
    Dominant,
    Throughput,
    Pdr,
    Delay,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Clusters,
        Figure::Connectivity,
        Figure::Dominant,
        Figure::Throughput,
        Figure::Pdr,
        Figure::Delay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Clusters => "clusters",
            Figure::Connectivity => "connectivity",
            Figure::Dominant => "dominant",
            Figure::Throughput => "throughput",
            Figure::Pdr => "pdr",
            Figure::Delay => "delay",
        }
    }

    /// Name of the x column.
    pub fn x_label(self) -> &'static str {
        match self {
            Figure::Clusters | Figure::Dominant => "nodes",
            Figure::Connectivity => "tr",
            Figure::Throughput | Figure::Delay => "time",
            Figure::Pdr => "pause",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// x values and per-algorithm statistics for one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub figure: Figure,
    pub algorithms: Vec<Algorithm>,
    pub x: Vec<f64>,
    /// `stats[i][j]`: algorithm `i` at `x[j]`.
    pub stats: Vec<Vec<Stat>>,
}

impl FigureTable {
    pub fn to_csv(&self) -> String {
        let mut s = self.figure.x_label().to_string();
        for a in &self.algorithms {
            let _ = write!(s, ",{a}_mean,{a}_std");
        }
        s.push('\n');
        for (j, x) in self.x.iter().enumerate() {
            let _ = write!(s, "{x}");
            for per_alg in &self.stats {
                let _ = write!(s, ",{},{}", per_alg[j].mean, per_alg[j].std);
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    /// Scenario the preset's axis is applied to.
    pub base: ScenarioConfig,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            seeds: (1..=10).collect(),
            algorithms: Algorithm::ALL.to_vec(),
            base: ScenarioConfig::default(),
        }
    }
}

fn node_grid() -> Vec<f64> {
    (1..=10).map(|i| f64::from(i * 10)).collect()
}

fn from_sweep(
    figure: Figure,
    spec: &SweepSpec,
    base: &ScenarioConfig,
    metric: &str,
) -> Result<FigureTable> {
    let rows = sweep(base, spec)?;
    let stats = spec
        .algorithms
        .iter()
        .map(|&a| {
            spec.values
                .iter()
                .map(|&v| {
                    rows.iter()
                        .find(|r| r.algorithm == a && r.value == v)
                        .and_then(|r| r.metric(metric))
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();
    Ok(FigureTable {
        figure,
        algorithms: spec.algorithms.clone(),
        x: spec.values.clone(),
        stats,
    })
}

/// A per-tick series averaged over seeds, one column pair per algorithm.
fn over_time(
    figure: Figure,
    base: &ScenarioConfig,
    opts: &FigureOptions,
    field: fn(&MetricsRecord) -> f64,
) -> Result<FigureTable> {
    use rayon::prelude::*;
    let len = base.ticks().max(1) as usize;
    let x = (0..len).map(|t| t as f64 * base.dt).collect();
    let stats = opts
        .algorithms
        .iter()
        .map(|&algorithm| {
            let runs: Vec<Vec<f64>> = opts
                .seeds
                .par_iter()
                .map(|&seed| {
                    let cfg = ScenarioConfig {
                        algorithm,
                        seed,
                        ..base.clone()
                    };
                    let mut sim = Simulation::new(&cfg)?;
                    sim.run_to_end()?;
                    Ok(sim.series().iter().map(field).collect())
                })
                .collect::<Result<_>>()?;
            Ok((0..len)
                .map(|t| Stat::of(&runs.iter().map(|r| r[t]).collect::<Vec<_>>()))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(FigureTable {
        figure,
        algorithms: opts.algorithms.clone(),
        x,
        stats,
    })
}

/// Runs the preset experiment behind `figure`.
pub fn figure_table(figure: Figure, opts: &FigureOptions) -> Result<FigureTable> {
    let spec = |axis, values| SweepSpec {
        axis,
        values,
        seeds: opts.seeds.clone(),
        algorithms: opts.algorithms.clone(),
    };
    let base = &opts.base;
    match figure {
        Figure::Clusters => {
            // only the initial setup is measured
            let cfg = ScenarioConfig {
                sim_time: 0.0,
                ..base.clone()
            };
            from_sweep(
                figure,
                &spec(SweepAxis::Nodes, node_grid()),
                &cfg,
                "clusters",
            )
        }
        Figure::Connectivity => {
            let cfg = ScenarioConfig {
                node_count: 50,
                ..base.clone()
            };
            let tr = [
                5.0, 10.0, 25.0, 50.0, 75.0, 100.0, 125.0, 150.0, 175.0, 200.0,
            ];
            from_sweep(
                figure,
                &spec(SweepAxis::Range, tr.to_vec()),
                &cfg,
                "connectivity",
            )
        }
        Figure::Dominant => {
            let mut cfg = base.clone();
            cfg.speed.max = 10.0;
            cfg.pause = 0.0;
            from_sweep(
                figure,
                &spec(SweepAxis::Nodes, node_grid()),
                &cfg,
                "dominant_set_updates",
            )
        }
        Figure::Pdr => {
            let mut cfg = base.clone();
            cfg.node_count = 100;
            cfg.flow.source_count = Some(100);
            let pauses = vec![0.0, 50.0, 100.0, 200.0, 500.0];
            from_sweep(figure, &spec(SweepAxis::Pause, pauses), &cfg, "pdr")
        }
        Figure::Throughput => {
            let mut cfg = base.clone();
            cfg.node_count = 100;
            cfg.flow.source_count = Some(100);
            over_time(figure, &cfg, opts, |r| r.throughput)
        }
        Figure::Delay => over_time(figure, base, opts, |r| r.mean_delay),
    }
}

/// Runs `figure`, writes `<dir>/<name>.csv` plus a manifest, and returns the CSV path.
pub fn figure_export(figure: Figure, opts: &FigureOptions, dir: &Path) -> Result<PathBuf> {
    let mut manifest = RunManifest::begin(&opts.base);
    let table = figure_table(figure, opts)?;
    let path = dir.join(format!("{}.csv", figure.name()));
    write_file(&path, &table.to_csv())?;
    manifest.outputs.push(path.clone());
    manifest.finish();
    manifest.write(&dir.join(format!("{}.manifest", figure.name())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run;

    #[test]
    fn empty_series_is_header_only() {
        let csv = series_csv(&[]);
        assert_eq!(csv, format!("{}\n", MetricsRecord::FIELDS.join(",")));
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn row_count_is_ticks_plus_header() {
        let cfg = ScenarioConfig {
            node_count: 15,
            sim_time: 25.0,
            ..ScenarioConfig::default()
        };
        let out = run(&cfg).unwrap();
        assert_eq!(series_csv(&out.series).lines().count(), 26);
    }

    #[test]
    fn floats_round_trip() {
        let r = MetricsRecord {
            tick: 3,
            cluster_count: 2,
            connectivity: 1.0 / 3.0,
            dominant_set_updates: 0,
            sent: 0,
            delivered: 0,
            dropped: 0,
            in_flight: 0,
            throughput: 0.1 + 0.2,
            mean_delay: 2.5,
            alive_nodes: 3,
        };
        let csv = series_csv(std::slice::from_ref(&r));
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[2].parse::<f64>().unwrap(), r.connectivity);
        assert_eq!(row[8].parse::<f64>().unwrap(), r.throughput);
    }

    #[test]
    fn manifest_text_loads_as_config() {
        let cfg = ScenarioConfig {
            seed: 99,
            ..ScenarioConfig::default()
        };
        let mut m = RunManifest::begin(&cfg);
        m.outputs.push(PathBuf::from("out/series.csv"));
        m.finish();
        let back = ScenarioConfig::from_kv_str(&m.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(m.config_hash, config_hash(&back));
        assert_eq!(m.config_hash.len(), 64);
    }

    #[test]
    fn figure_names_parse() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!(matches!(
            "fig9".parse::<Figure>(),
            Err(Error::UnknownFigure(_))
        ));
    }

    #[test]
    fn figure_csv_schema() {
        let opts = FigureOptions {
            seeds: vec![1],
            algorithms: vec![Algorithm::Paiwca, Algorithm::Wca],
            base: ScenarioConfig {
                sim_time: 5.0,
                ..ScenarioConfig::default()
            },
        };
        let table = figure_table(Figure::Connectivity, &opts).unwrap();
        let csv = table.to_csv();
        assert_eq!(
            csv.lines().next().unwrap(),
            "tr,paiwca_mean,paiwca_std,wca_mean,wca_std"
        );
        assert_eq!(csv.lines().count(), 11);

        let over_time = figure_table(Figure::Delay, &opts).unwrap();
        assert_eq!(over_time.x, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            over_time.to_csv().lines().next().unwrap(),
            "time,paiwca_mean,paiwca_std,wca_mean,wca_std"
        );
    }
}
