//! Experiment configuration: the full sweep grid plus every model and
//! search parameter, loadable from a TOML file with the same field names as
//! the CLI flags.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use grn_core::search::{ScheduleRounding, SearchConfig};
use grn_core::{Method, Topology};

/// A full benchmark sweep: every combination of topology, average degree,
/// signal size and run index becomes one simulated instance, evaluated by
/// every method.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub topologies: Vec<Topology>,
    pub n: usize,
    pub avg_k_values: Vec<f64>,
    pub signal_sizes: Vec<usize>,
    pub methods: Vec<Method>,
    pub runs: u64,
    pub base_seed: u64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub optimum_epsilon: f64,
    pub ws_rewire_p: f64,
    pub source_uniform: bool,
    pub max_cardinality: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub schedule_rounding: ScheduleRounding,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            topologies: vec![Topology::Er, Topology::Ba, Topology::Ws],
            n: 100,
            avg_k_values: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            signal_sizes: vec![5, 10, 15, 20, 40, 60, 80, 100],
            methods: vec![Method::Sfs, Method::Sffs, Method::SffsBa],
            runs: 50,
            base_seed: 0,
            gamma: 2.5,
            delta: 0.05,
            alpha: 1.0,
            optimum_epsilon: 0.01,
            ws_rewire_p: 0.1,
            source_uniform: true,
            max_cardinality: 5,
            c1: 0.98,
            c2: 0.01,
            c3: 0.01,
            schedule_rounding: ScheduleRounding::Floor,
        }
    }
}

/// Serialized form: enums written as their display strings.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    topologies: Vec<String>,
    n: usize,
    avg_k_values: Vec<f64>,
    signal_sizes: Vec<usize>,
    methods: Vec<String>,
    runs: u64,
    base_seed: u64,
    gamma: f64,
    delta: f64,
    alpha: f64,
    optimum_epsilon: f64,
    ws_rewire_p: f64,
    source_uniform: bool,
    max_cardinality: usize,
    c1: f64,
    c2: f64,
    c3: f64,
    schedule_rounding: String,
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig::from(&ExperimentConfig::default())
    }
}

impl From<&ExperimentConfig> for RawConfig {
    fn from(cfg: &ExperimentConfig) -> Self {
        RawConfig {
            topologies: cfg.topologies.iter().map(|t| t.to_string()).collect(),
            n: cfg.n,
            avg_k_values: cfg.avg_k_values.clone(),
            signal_sizes: cfg.signal_sizes.clone(),
            methods: cfg.methods.iter().map(|m| m.to_string()).collect(),
            runs: cfg.runs,
            base_seed: cfg.base_seed,
            gamma: cfg.gamma,
            delta: cfg.delta,
            alpha: cfg.alpha,
            optimum_epsilon: cfg.optimum_epsilon,
            ws_rewire_p: cfg.ws_rewire_p,
            source_uniform: cfg.source_uniform,
            max_cardinality: cfg.max_cardinality,
            c1: cfg.c1,
            c2: cfg.c2,
            c3: cfg.c3,
            schedule_rounding: match cfg.schedule_rounding {
                ScheduleRounding::Floor => "floor".into(),
                ScheduleRounding::Round => "round".into(),
            },
        }
    }
}

impl TryFrom<RawConfig> for ExperimentConfig {
    type Error = anyhow::Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let topologies = raw
            .topologies
            .iter()
            .map(|s| s.parse::<Topology>().map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        let methods = raw
            .methods
            .iter()
            .map(|s| s.parse::<Method>().map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
        let schedule_rounding = match raw.schedule_rounding.to_ascii_lowercase().as_str() {
            "floor" => ScheduleRounding::Floor,
            "round" => ScheduleRounding::Round,
            other => bail!("unknown schedule_rounding `{other}` (expected floor or round)"),
        };
        Ok(ExperimentConfig {
            topologies,
            n: raw.n,
            avg_k_values: raw.avg_k_values,
            signal_sizes: raw.signal_sizes,
            methods,
            runs: raw.runs,
            base_seed: raw.base_seed,
            gamma: raw.gamma,
            delta: raw.delta,
            alpha: raw.alpha,
            optimum_epsilon: raw.optimum_epsilon,
            ws_rewire_p: raw.ws_rewire_p,
            source_uniform: raw.source_uniform,
            max_cardinality: raw.max_cardinality,
            c1: raw.c1,
            c2: raw.c2,
            c3: raw.c3,
            schedule_rounding,
        })
    }
}

impl ExperimentConfig {
    pub fn load_toml(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let raw: RawConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        raw.try_into()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(&RawConfig::from(self)).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.topologies.is_empty()
            || self.avg_k_values.is_empty()
            || self.signal_sizes.is_empty()
            || self.methods.is_empty()
        {
            bail!("topologies, avg_k_values, signal_sizes and methods must be non-empty");
        }
        if self.topologies.contains(&Topology::Inferred) {
            bail!("INFERRED is not a generator topology");
        }
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.n < 2 {
            bail!("n must be at least 2");
        }
        for &k in &self.avg_k_values {
            if !k.is_finite() || k <= 0.0 || k > (self.n - 1) as f64 {
                bail!("avg_k {k} outside (0, n-1] for n={}", self.n);
            }
        }
        for &t in &self.signal_sizes {
            if t < 2 {
                bail!("signal size {t} too small for transition pairs");
            }
        }
        if !(0.0..=1.0).contains(&self.ws_rewire_p) {
            bail!("ws_rewire_p must be in [0, 1]");
        }
        let sum = self.c1 + self.c2 + self.c3;
        if self.c1 <= 0.0 || self.c2 <= 0.0 || self.c3 <= 0.0 || (sum - 1.0).abs() > 1e-12 {
            bail!("c1, c2, c3 must be positive and sum to 1");
        }
        self.search_config().validate()?;
        Ok(())
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            gamma: self.gamma,
            delta: self.delta,
            alpha: self.alpha,
            optimum_epsilon: self.optimum_epsilon,
            max_cardinality: self.max_cardinality,
            rounding: self.schedule_rounding,
        }
    }

    /// Total number of result rows a sweep will produce.
    pub fn row_count(&self) -> u64 {
        self.topologies.len() as u64
            * self.avg_k_values.len() as u64
            * self.signal_sizes.len() as u64
            * self.methods.len() as u64
            * self.runs
    }
}
