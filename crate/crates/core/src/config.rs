//! Scenario configuration and its flat `key = value` text format.
//!
//! One setting per line, `#` starts a comment, keys use dotted section
//! prefixes (`energy.drain_ch = 0.1`). Unknown keys are rejected. Unset
//! keys keep their defaults, so an empty file is the default scenario.
//! Node arrivals are written as indexed keys:
//!
//! ```text
//! arrival.0 = <tick> <x> <y> <range> <energy> [charge]
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::baselines::WcaParams;
use crate::clustering::{ChprobParams, PaiwcaParams, TermScale, WeightParams};
use crate::energy::EnergyModel;
use crate::mobility::{Area, LinkRule, RwpParams, SpeedRange};
use crate::traffic::FlowConfig;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config file {path}: {reason}")]
    File { path: String, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("`{key}`: cannot parse `{value}` ({reason})")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("`{key}` = {value} is outside {bound} (pass the unsafe flag to override)")]
    OutOfRange {
        key: String,
        value: String,
        bound: String,
    },
    #[error("`{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Paiwca,
    Wca,
    LowestId,
    HighestDegree,
    Mwis,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Paiwca,
        Algorithm::Wca,
        Algorithm::LowestId,
        Algorithm::HighestDegree,
        Algorithm::Mwis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Paiwca => "paiwca",
            Algorithm::Wca => "wca",
            Algorithm::LowestId => "lowest_id",
            Algorithm::HighestDegree => "highest_degree",
            Algorithm::Mwis => "mwis",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "paiwca" => Ok(Algorithm::Paiwca),
            "wca" => Ok(Algorithm::Wca),
            "lowest_id" | "lowestid" => Ok(Algorithm::LowestId),
            "highest_degree" | "highestdegree" => Ok(Algorithm::HighestDegree),
            "mwis" => Ok(Algorithm::Mwis),
            other => Err(format!(
                "unknown algorithm `{other}` (paiwca, wca, lowest_id, highest_degree, mwis)"
            )),
        }
    }
}

/// How transmission ranges are assigned to the initial nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeSpec {
    /// Independent uniform draw per node.
    Uniform { min: f64, max: f64 },
    /// Every node uses the same range.
    Fixed(f64),
}

/// A node joining the network at `tick`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub tick: u64,
    pub x: f64,
    pub y: f64,
    pub range: f64,
    /// Battery capacity in joules.
    pub energy: f64,
    /// Initial charge as a fraction of capacity.
    pub charge: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub node_count: usize,
    pub area: Area,
    pub speed: SpeedRange,
    pub pause: f64,
    pub range: RangeSpec,
    pub initial_energy: (f64, f64),
    /// Transmission rate `T_x` in watts.
    pub tx_rate: f64,
    pub sim_time: f64,
    pub dt: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub link_rule: LinkRule,
    pub weights: WeightParams,
    pub chprob: ChprobParams,
    pub orphan_timeout: u32,
    pub max_cluster_size: Option<usize>,
    pub energy: EnergyModel,
    pub wca: WcaParams,
    pub flow: FlowConfig,
    pub arrivals: Vec<Arrival>,
    /// Disables the parameter-range bounds.
    pub unsafe_bounds: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            node_count: 50,
            area: Area::new(500.0, 500.0),
            speed: SpeedRange::new(1.0, 10.0),
            pause: 0.0,
            range: RangeSpec::Uniform {
                min: 10.0,
                max: 70.0,
            },
            initial_energy: (10.0, 80.0),
            tx_rate: 0.02,
            sim_time: 500.0,
            dt: 1.0,
            algorithm: Algorithm::Paiwca,
            seed: 1,
            link_rule: LinkRule::Mutual,
            weights: WeightParams::default(),
            chprob: ChprobParams::default(),
            orphan_timeout: 5,
            max_cluster_size: None,
            energy: EnergyModel::default(),
            wca: WcaParams::default(),
            flow: FlowConfig::default(),
            arrivals: Vec::new(),
            unsafe_bounds: false,
        }
    }
}

fn bad(key: &str, value: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| bad(key, value, e))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn check_bound(key: &str, value: f64, lo: f64, hi: f64) -> Result<(), ConfigError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(ConfigError::OutOfRange {
            key: key.to_string(),
            value: value.to_string(),
            bound: format!("[{lo}, {hi}]"),
        })
    }
}

impl ScenarioConfig {
    /// Canned arrival scenario: 13 static nodes, a 14th node joins at tick 10.
    pub fn arrival_scenario() -> Self {
        Self {
            node_count: 13,
            pause: f64::INFINITY,
            range: RangeSpec::Fixed(150.0),
            sim_time: 30.0,
            arrivals: vec![Arrival {
                tick: 10,
                x: 250.0,
                y: 250.0,
                range: 150.0,
                energy: 80.0,
                charge: 1.0,
            }],
            ..Self::default()
        }
    }

    /// Total node slots, including scheduled arrivals.
    pub fn capacity(&self) -> usize {
        self.node_count + self.arrivals.len()
    }

    pub fn ticks(&self) -> u64 {
        (self.sim_time / self.dt + 1e-9).floor() as u64
    }

    pub fn rwp(&self) -> RwpParams {
        RwpParams {
            area: self.area,
            speed: self.speed,
            pause: self.pause,
        }
    }

    pub fn max_range(&self) -> f64 {
        let base = match self.range {
            RangeSpec::Uniform { max, .. } => max,
            RangeSpec::Fixed(r) => r,
        };
        self.arrivals.iter().map(|a| a.range).fold(base, f64::max)
    }

    /// Clustering parameters, with term scales taken from the scenario maxima.
    pub fn paiwca_params(&self) -> PaiwcaParams {
        let mut weights = self.weights;
        weights.scale = TermScale {
            tr: self.max_range(),
            tx: self.tx_rate,
            mv: self.speed.max,
            pv: self
                .arrivals
                .iter()
                .map(|a| a.energy)
                .fold(self.initial_energy.1, f64::max),
        };
        PaiwcaParams {
            weights,
            chprob: self.chprob,
            orphan_timeout: self.orphan_timeout,
            max_cluster_size: self.max_cluster_size,
        }
    }

    /// Parses `text` on top of the defaults.
    pub fn from_kv_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_kv_str(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_kv_str(&text)
    }

    pub fn apply_kv_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "nodes" => self.node_count = parse(key, value)?,
            "area.width" => self.area.width = parse(key, value)?,
            "area.height" => self.area.height = parse(key, value)?,
            "speed.min" => self.speed.min = parse(key, value)?,
            "speed.max" => self.speed.max = parse(key, value)?,
            "pause" => self.pause = parse(key, value)?,
            "range.fixed" => {
                self.range = match value {
                    "none" => RangeSpec::Uniform {
                        min: 10.0,
                        max: 70.0,
                    },
                    v => RangeSpec::Fixed(parse(key, v)?),
                }
            }
            "range.min" | "range.max" => {
                let v: f64 = parse(key, value)?;
                let (mut min, mut max) = match self.range {
                    RangeSpec::Uniform { min, max } => (min, max),
                    RangeSpec::Fixed(_) => (10.0, 70.0),
                };
                if key == "range.min" {
                    min = v;
                } else {
                    max = v;
                }
                self.range = RangeSpec::Uniform { min, max };
            }
            "energy.initial_min" => self.initial_energy.0 = parse(key, value)?,
            "energy.initial_max" => self.initial_energy.1 = parse(key, value)?,
            "energy.drain_idle" => self.energy.drain_idle = parse(key, value)?,
            "energy.drain_member" => self.energy.drain_member = parse(key, value)?,
            "energy.drain_ch" => self.energy.drain_ch = parse(key, value)?,
            "energy.cost_tx" => self.energy.cost_tx = parse(key, value)?,
            "energy.cost_rx" => self.energy.cost_rx = parse(key, value)?,
            "tx_rate" => self.tx_rate = parse(key, value)?,
            "sim_time" => self.sim_time = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "algorithm" => self.algorithm = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "link.rule" => {
                self.link_rule = match value {
                    "mutual" => LinkRule::Mutual,
                    "either" => LinkRule::Either,
                    _ => return Err(bad(key, value, "expected mutual or either")),
                }
            }
            "weights.w1" => self.weights.w1 = parse(key, value)?,
            "weights.w2" => self.weights.w2 = parse(key, value)?,
            "weights.w3" => self.weights.w3 = parse(key, value)?,
            "weights.w4" => self.weights.w4 = parse(key, value)?,
            "weights.include_chprob" => self.weights.include_chprob_term = parse_bool(key, value)?,
            "weights.normalize" => self.weights.normalize_terms = parse_bool(key, value)?,
            "chprob.c_prob" => self.chprob.c_prob = parse(key, value)?,
            "chprob.p_min" => self.chprob.p_min = parse(key, value)?,
            "chprob.tr_max" => self.chprob.tr_max = parse(key, value)?,
            "chprob.normalize_range" => self.chprob.normalize_range = parse_bool(key, value)?,
            "cluster.orphan_timeout" => self.orphan_timeout = parse(key, value)?,
            "cluster.max_size" => {
                self.max_cluster_size = match value {
                    "none" | "0" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "wca.w1" => self.wca.w1 = parse(key, value)?,
            "wca.w2" => self.wca.w2 = parse(key, value)?,
            "wca.w3" => self.wca.w3 = parse(key, value)?,
            "wca.w4" => self.wca.w4 = parse(key, value)?,
            "wca.ideal_degree" => self.wca.ideal_degree = parse(key, value)?,
            "wca.raw_degree" => self.wca.raw_degree = parse_bool(key, value)?,
            "traffic.sources" => {
                self.flow.source_count = match value {
                    "all" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "traffic.rate" => self.flow.rate = parse(key, value)?,
            "traffic.queue_capacity" => self.flow.queue_capacity = parse(key, value)?,
            "traffic.per_hop_delay" => self.flow.per_hop_delay = parse(key, value)?,
            "traffic.service_rate" => self.flow.service_rate = parse(key, value)?,
            "unsafe" => self.unsafe_bounds = parse_bool(key, value)?,
            _ => {
                if let Some(index) = key.strip_prefix("arrival.") {
                    let index: usize = index
                        .parse()
                        .map_err(|_| ConfigError::UnknownKey(key.to_string()))?;
                    let arrival = parse_arrival(key, value)?;
                    if index > self.arrivals.len() {
                        return Err(invalid(key, "arrival indices must be consecutive from 0"));
                    }
                    if index == self.arrivals.len() {
                        self.arrivals.push(arrival);
                    } else {
                        self.arrivals[index] = arrival;
                    }
                } else {
                    return Err(ConfigError::UnknownKey(key.to_string()));
                }
            }
        }
        Ok(())
    }

    /// Structural checks always apply; the parameter-range bounds are
    /// skipped when `unsafe_bounds` is set.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let structural = |key: &str, e: crate::Error| invalid(key, e.to_string());
        if self.node_count == 0 {
            return Err(invalid("nodes", "must be >= 1"));
        }
        self.rwp()
            .validate()
            .map_err(|e| structural("mobility", e))?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt", "must be positive and finite"));
        }
        if !(self.sim_time >= 0.0) || !self.sim_time.is_finite() {
            return Err(invalid("sim_time", "must be finite and >= 0"));
        }
        match self.range {
            RangeSpec::Uniform { min, max } => {
                if !(min > 0.0 && max >= min) {
                    return Err(invalid("range.min", "need 0 < range.min <= range.max"));
                }
            }
            RangeSpec::Fixed(r) => {
                if !(r > 0.0) {
                    return Err(invalid("range.fixed", "must be positive"));
                }
            }
        }
        if self.max_range() > self.chprob.tr_max {
            return Err(invalid(
                "chprob.tr_max",
                format!("must cover the largest range ({} m)", self.max_range()),
            ));
        }
        let (emin, emax) = self.initial_energy;
        if !(emin > 0.0 && emax >= emin && emax.is_finite()) {
            return Err(invalid(
                "energy.initial_min",
                "need 0 < initial_min <= initial_max",
            ));
        }
        if !(self.tx_rate >= 0.0) {
            return Err(invalid("tx_rate", "must be >= 0"));
        }
        self.energy
            .validate()
            .map_err(|e| structural("energy", e))?;
        self.paiwca_params()
            .validate()
            .map_err(|e| structural("clustering", e))?;
        self.wca.validate().map_err(|e| structural("wca", e))?;
        self.flow.validate().map_err(|e| structural("traffic", e))?;
        for (i, a) in self.arrivals.iter().enumerate() {
            let key = format!("arrival.{i}");
            if !self
                .area
                .contains(&crate::mobility::Position::new(a.x, a.y))
            {
                return Err(invalid(&key, "position outside the area"));
            }
            if !(a.range > 0.0 && a.energy > 0.0 && a.charge > 0.0 && a.charge <= 1.0) {
                return Err(invalid(&key, "need range > 0, energy > 0, 0 < charge <= 1"));
            }
        }

        if self.unsafe_bounds {
            return Ok(());
        }
        check_bound("nodes", self.node_count as f64, 10.0, 300.0)?;
        check_bound("speed.max", self.speed.max, 10.0, 100.0)?;
        match self.range {
            RangeSpec::Uniform { min, max } => {
                check_bound("range.min", min, 10.0, 70.0)?;
                check_bound("range.max", max, 10.0, 70.0)?;
            }
            RangeSpec::Fixed(r) => check_bound("range.fixed", r, 5.0, 200.0)?,
        }
        check_bound("energy.initial_min", emin, 10.0, 80.0)?;
        check_bound("energy.initial_max", emax, 10.0, 80.0)?;
        Ok(())
    }

    /// Every setting as `key = value` lines, in a fixed order. Parsing the
    /// output yields an identical config.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("nodes", self.node_count.to_string());
        put("area.width", self.area.width.to_string());
        put("area.height", self.area.height.to_string());
        put("speed.min", self.speed.min.to_string());
        put("speed.max", self.speed.max.to_string());
        put("pause", self.pause.to_string());
        match self.range {
            RangeSpec::Uniform { min, max } => {
                put("range.min", min.to_string());
                put("range.max", max.to_string());
            }
            RangeSpec::Fixed(r) => put("range.fixed", r.to_string()),
        }
        put("energy.initial_min", self.initial_energy.0.to_string());
        put("energy.initial_max", self.initial_energy.1.to_string());
        put("energy.drain_idle", self.energy.drain_idle.to_string());
        put("energy.drain_member", self.energy.drain_member.to_string());
        put("energy.drain_ch", self.energy.drain_ch.to_string());
        put("energy.cost_tx", self.energy.cost_tx.to_string());
        put("energy.cost_rx", self.energy.cost_rx.to_string());
        put("tx_rate", self.tx_rate.to_string());
        put("sim_time", self.sim_time.to_string());
        put("dt", self.dt.to_string());
        put("algorithm", self.algorithm.to_string());
        put("seed", self.seed.to_string());
        put(
            "link.rule",
            match self.link_rule {
                LinkRule::Mutual => "mutual",
                LinkRule::Either => "either",
            }
            .to_string(),
        );
        put("weights.w1", self.weights.w1.to_string());
        put("weights.w2", self.weights.w2.to_string());
        put("weights.w3", self.weights.w3.to_string());
        put("weights.w4", self.weights.w4.to_string());
        put(
            "weights.include_chprob",
            self.weights.include_chprob_term.to_string(),
        );
        put(
            "weights.normalize",
            self.weights.normalize_terms.to_string(),
        );
        put("chprob.c_prob", self.chprob.c_prob.to_string());
        put("chprob.p_min", self.chprob.p_min.to_string());
        put("chprob.tr_max", self.chprob.tr_max.to_string());
        put(
            "chprob.normalize_range",
            self.chprob.normalize_range.to_string(),
        );
        put("cluster.orphan_timeout", self.orphan_timeout.to_string());
        put(
            "cluster.max_size",
            self.max_cluster_size
                .map_or_else(|| "none".to_string(), |m| m.to_string()),
        );
        put("wca.w1", self.wca.w1.to_string());
        put("wca.w2", self.wca.w2.to_string());
        put("wca.w3", self.wca.w3.to_string());
        put("wca.w4", self.wca.w4.to_string());
        put("wca.ideal_degree", self.wca.ideal_degree.to_string());
        put("wca.raw_degree", self.wca.raw_degree.to_string());
        put(
            "traffic.sources",
            self.flow
                .source_count
                .map_or_else(|| "all".to_string(), |n| n.to_string()),
        );
        put("traffic.rate", self.flow.rate.to_string());
        put(
            "traffic.queue_capacity",
            self.flow.queue_capacity.to_string(),
        );
        put("traffic.per_hop_delay", self.flow.per_hop_delay.to_string());
        put("traffic.service_rate", self.flow.service_rate.to_string());
        put("unsafe", self.unsafe_bounds.to_string());
        for (i, a) in self.arrivals.iter().enumerate() {
            put(
                &format!("arrival.{i}"),
                format!(
                    "{} {} {} {} {} {}",
                    a.tick, a.x, a.y, a.range, a.energy, a.charge
                ),
            );
        }
        s
    }
}

fn parse_arrival(key: &str, value: &str) -> Result<Arrival, ConfigError> {
    let fields: Vec<&str> = value.split_whitespace().collect();
    if !(5..=6).contains(&fields.len()) {
        return Err(bad(key, value, "expected `tick x y range energy [charge]`"));
    }
    Ok(Arrival {
        tick: parse(key, fields[0])?,
        x: parse(key, fields[1])?,
        y: parse(key, fields[2])?,
        range: parse(key, fields[3])?,
        energy: parse(key, fields[4])?,
        charge: match fields.get(5) {
            Some(c) => parse(key, c)?,
            None => 1.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = ScenarioConfig::from_kv_str("# nothing here\n\n").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.node_count, 50);
        assert_eq!(cfg.area, Area::new(500.0, 500.0));
        assert_eq!(cfg.sim_time, 500.0);
        assert_eq!(cfg.algorithm, Algorithm::Paiwca);
        assert_eq!(
            (
                cfg.weights.w1,
                cfg.weights.w2,
                cfg.weights.w3,
                cfg.weights.w4
            ),
            (0.2, 0.2, 0.05, 0.05)
        );
        assert_eq!(cfg.tx_rate, 0.02);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ScenarioConfig::from_kv_str("energy.drain_xx = 1").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey("energy.drain_xx".into()));
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = ScenarioConfig::from_kv_str("nodes = 20\nbogus line").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }));
    }

    #[test]
    fn node_bound_and_unsafe_override() {
        let mut cfg = ScenarioConfig::default();
        cfg.set("nodes", "400").unwrap();
        let err = cfg.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nodes") && msg.contains("[10, 300]"), "{msg}");
        cfg.set("unsafe", "true").unwrap();
        cfg.validate().unwrap();
    }

    #[test]
    fn bad_value_is_named() {
        let err = ScenarioConfig::from_kv_str("pause = soon").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { ref key, .. } if key == "pause"));
    }

    #[test]
    fn kv_round_trip() {
        let mut cfg = ScenarioConfig::arrival_scenario();
        cfg.weights.w3 = 0.1 + 0.2; // not exactly representable in short form
        cfg.max_cluster_size = Some(7);
        cfg.flow.source_count = Some(12);
        cfg.link_rule = LinkRule::Either;
        cfg.arrivals.push(Arrival {
            tick: 3,
            x: 1.5,
            y: 2.25,
            range: 40.0,
            energy: 33.3,
            charge: 0.4,
        });
        let text = cfg.to_kv_string();
        assert_eq!(ScenarioConfig::from_kv_str(&text).unwrap(), cfg);
        assert_eq!(
            ScenarioConfig::from_kv_str(&ScenarioConfig::default().to_kv_string()).unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn arrivals_must_be_consecutive() {
        let err = ScenarioConfig::from_kv_str("arrival.1 = 5 10 10 50 40").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { .. }));
        let cfg = ScenarioConfig::from_kv_str("arrival.0 = 5 10 10 50 40").unwrap();
        assert_eq!(cfg.arrivals[0].charge, 1.0);
        assert_eq!(cfg.capacity(), 51);
    }

    #[test]
    fn infinite_pause_parses() {
        let cfg = ScenarioConfig::from_kv_str("pause = inf").unwrap();
        assert!(cfg.pause.is_infinite());
        cfg.validate().unwrap();
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dmac".parse::<Algorithm>().is_err());
    }
}
