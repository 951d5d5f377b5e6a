//! Multi-seed parameter sweeps.
//!
//! Cells run in parallel; results always come back in
//! (algorithm, value, seed) order so aggregation is deterministic.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{Algorithm, RangeSpec, ScenarioConfig};
use crate::engine::{run, RunSummary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Nodes,
    Range,
    Pause,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Nodes => "nodes",
            SweepAxis::Range => "range",
            SweepAxis::Pause => "pause",
        }
    }

    /// Copy of `base` with this axis set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut cfg = base.clone();
        match self {
            SweepAxis::Nodes => cfg.node_count = value as usize,
            SweepAxis::Range => cfg.range = RangeSpec::Fixed(value),
            SweepAxis::Pause => cfg.pause = value,
        }
        cfg
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nodes" | "node_count" => Ok(SweepAxis::Nodes),
            "range" | "tr" => Ok(SweepAxis::Range),
            "pause" => Ok(SweepAxis::Pause),
            other => Err(format!("unknown axis `{other}` (nodes, range, pause)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
}

/// One finished run of the cross product.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub algorithm: Algorithm,
    pub value: f64,
    pub summary: RunSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single sample.
    pub std: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self::default();
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

/// Per-seed aggregates for one (algorithm, value) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub axis: SweepAxis,
    pub value: f64,
    pub runs: usize,
    pub clusters: Stat,
    pub connectivity: Stat,
    pub dominant_set_updates: Stat,
    pub throughput: Stat,
    pub pdr: Stat,
    pub mean_delay: Stat,
}

impl SweepRow {
    pub const METRICS: [&'static str; 6] = [
        "clusters",
        "connectivity",
        "dominant_set_updates",
        "throughput",
        "pdr",
        "mean_delay",
    ];

    pub fn metric(&self, name: &str) -> Option<Stat> {
        Some(match name {
            "clusters" => self.clusters,
            "connectivity" => self.connectivity,
            "dominant_set_updates" => self.dominant_set_updates,
            "throughput" => self.throughput,
            "pdr" => self.pdr,
            "mean_delay" => self.mean_delay,
            _ => return None,
        })
    }
}

fn check(spec: &SweepSpec) -> Result<()> {
    if spec.values.is_empty() {
        return Err(Error::param("values", "sweep needs at least one value"));
    }
    if spec.seeds.is_empty() {
        return Err(Error::param("seeds", "sweep needs at least one seed"));
    }
    if spec.algorithms.is_empty() {
        return Err(Error::param(
            "algorithms",
            "sweep needs at least one algorithm",
        ));
    }
    Ok(())
}

/// Runs every (algorithm, value, seed) combination.
pub fn sweep_cells(base: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    check(spec)?;
    let mut jobs = Vec::new();
    for &algorithm in &spec.algorithms {
        for &value in &spec.values {
            for &seed in &spec.seeds {
                let mut cfg = spec.axis.apply(base, value);
                cfg.algorithm = algorithm;
                cfg.seed = seed;
                jobs.push((algorithm, value, cfg));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(algorithm, value, cfg)| {
            Ok(SweepCell {
                algorithm,
                value,
                summary: run(&cfg)?.summary,
            })
        })
        .collect()
}

/// Groups cells by (algorithm, value), keeping first-seen order.
pub fn aggregate(axis: SweepAxis, cells: &[SweepCell]) -> Vec<SweepRow> {
    let mut keys: Vec<(Algorithm, f64)> = Vec::new();
    for c in cells {
        if !keys.iter().any(|&(a, v)| a == c.algorithm && v == c.value) {
            keys.push((c.algorithm, c.value));
        }
    }
    keys.into_iter()
        .map(|(algorithm, value)| {
            let group: Vec<&RunSummary> = cells
                .iter()
                .filter(|c| c.algorithm == algorithm && c.value == value)
                .map(|c| &c.summary)
                .collect();
            let stat = |f: fn(&RunSummary) -> f64| {
                Stat::of(&group.iter().map(|s| f(s)).collect::<Vec<_>>())
            };
            SweepRow {
                algorithm,
                axis,
                value,
                runs: group.len(),
                clusters: stat(|s| s.initial_clusters as f64),
                connectivity: stat(|s| s.mean_connectivity),
                dominant_set_updates: stat(|s| s.dominant_set_updates as f64),
                throughput: stat(|s| s.throughput),
                pdr: stat(|s| s.pdr),
                mean_delay: stat(|s| s.mean_delay),
            }
        })
        .collect()
}

pub fn sweep(base: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    Ok(aggregate(spec.axis, &sweep_cells(base, spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ScenarioConfig {
        ScenarioConfig {
            node_count: 20,
            sim_time: 20.0,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn stat_mean_and_sample_std() {
        let s = Stat::of(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(s.mean, 5.0);
        assert!((s.std - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(
            Stat::of(&[3.0]),
            Stat {
                mean: 3.0,
                std: 0.0
            }
        );
    }

    #[test]
    fn degenerate_sweep_matches_run() {
        let spec = SweepSpec {
            axis: SweepAxis::Nodes,
            values: vec![20.0],
            seeds: vec![4],
            algorithms: vec![Algorithm::Paiwca],
        };
        let rows = sweep(&base(), &spec).unwrap();
        let mut cfg = base();
        cfg.seed = 4;
        let single = run(&cfg).unwrap().summary;
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].runs, 1);
        assert_eq!(
            rows[0].pdr,
            Stat {
                mean: single.pdr,
                std: 0.0
            }
        );
        assert_eq!(
            rows[0].dominant_set_updates.mean,
            single.dominant_set_updates as f64
        );
        assert_eq!(rows[0].clusters.mean, single.initial_clusters as f64);
    }

    #[test]
    fn rows_come_in_algorithm_value_order() {
        let spec = SweepSpec {
            axis: SweepAxis::Pause,
            values: vec![0.0, 10.0],
            seeds: vec![1, 2],
            algorithms: vec![Algorithm::Wca, Algorithm::Paiwca],
        };
        let rows = sweep(&base(), &spec).unwrap();
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.algorithm, r.value, r.runs))
            .collect();
        assert_eq!(
            keys,
            vec![
                (Algorithm::Wca, 0.0, 2),
                (Algorithm::Wca, 10.0, 2),
                (Algorithm::Paiwca, 0.0, 2),
                (Algorithm::Paiwca, 10.0, 2),
            ]
        );
        assert_eq!(rows, sweep(&base(), &spec).unwrap());
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let spec = SweepSpec {
            axis: SweepAxis::Range,
            values: vec![],
            seeds: vec![1],
            algorithms: vec![Algorithm::Paiwca],
        };
        assert!(sweep(&base(), &spec).is_err());
    }
}
