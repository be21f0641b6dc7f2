//! Run configuration: defaults, `key=value` config files, and validation.

use std::path::{Path, PathBuf};

use crate::centrality::Weights;
use crate::engine::{Experiment, SweepParam};
use crate::error::{Result, SimError};
use crate::strategy::StrategyKind;

pub const SEED_ENV: &str = "CCNSIM_SEED";
pub const DEFAULT_SEED: u64 = 1;
/// Documented variation range of the Zipf exponent.
pub const ZIPF_A_RANGE: (f64, f64) = (0.1, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub strategies: Vec<StrategyKind>,
    /// Runs use seeds `seed, seed + 1, ..`.
    pub seed_count: usize,
    pub sweep: Option<SweepParam>,
    pub sweep_values: Vec<f64>,
    pub out: Option<PathBuf>,
    pub dump_trace: Option<PathBuf>,
    pub dump_centrality: bool,
    pub allow_out_of_range: bool,
    seed_set: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let experiment = Experiment {
            seed: DEFAULT_SEED,
            ..Experiment::default()
        };
        RunConfig {
            strategies: vec![experiment.strategy.kind],
            experiment,
            seed_count: 1,
            sweep: None,
            sweep_values: Vec::new(),
            out: None,
            dump_trace: None,
            dump_centrality: false,
            allow_out_of_range: false,
            seed_set: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| SimError::param(key, value, "not a valid number"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(SimError::param(key, value, "expected true or false")),
    }
}

impl RunConfig {
    /// Sets one parameter by name. Dashes and underscores are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        let exp = &mut self.experiment;
        match k {
            "nodes" => exp.nodes = parse_num(k, value)?,
            "links" => exp.links = parse_num(k, value)?,
            "contents" => exp.workload.catalog_size = parse_num(k, value)?,
            "consumers" => exp.workload.consumer_count = parse_num(k, value)?,
            "cache_size" => exp.cache_size = parse_num(k, value)?,
            "zipf_a" => exp.workload.zipf_a = parse_num(k, value)?,
            "zipf_q" => exp.workload.zipf_q = parse_num(k, value)?,
            "lambda" => exp.workload.lambda_per_consumer = parse_num(k, value)?,
            "duration" => exp.workload.duration = parse_num(k, value)?,
            "delay_ms" => exp.link.per_hop_delay = parse_num::<f64>(k, value)? * 1e-3,
            "bandwidth_mbps" => exp.link.bandwidth = parse_num::<f64>(k, value)? * 1e6,
            "data_bits" => exp.link.data_packet_bits = parse_num(k, value)?,
            "interest_bits" => exp.link.interest_packet_bits = parse_num(k, value)?,
            "aggregation" => exp.aggregation = parse_bool(k, value)?,
            "strategy" => {
                let kinds = if value.trim().eq_ignore_ascii_case("all") {
                    StrategyKind::ALL.to_vec()
                } else {
                    value
                        .split(',')
                        .map(str::parse)
                        .collect::<Result<Vec<StrategyKind>>>()?
                };
                if kinds.is_empty() {
                    return Err(SimError::param(k, value, "no strategy given"));
                }
                exp.strategy.kind = kinds[0];
                self.strategies = kinds;
            }
            "prob_p" => exp.strategy.prob_p = parse_num(k, value)?,
            "mpc_threshold" => exp.strategy.mpc_threshold = parse_num(k, value)?,
            "alpha" => exp.strategy.weights.connectivity = parse_num(k, value)?,
            "beta" => exp.strategy.weights.betweenness = parse_num(k, value)?,
            "gamma" => exp.strategy.weights.eigenvector = parse_num(k, value)?,
            "seed" => {
                exp.seed = parse_num(k, value)?;
                self.seed_set = true;
            }
            "seeds" => self.seed_count = parse_num(k, value)?,
            "sweep" => self.sweep = Some(value.parse()?),
            "sweep_values" => {
                self.sweep_values = value
                    .split(',')
                    .filter(|v| !v.trim().is_empty())
                    .map(|v| parse_num(k, v))
                    .collect::<Result<_>>()?
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "dump_trace" => self.dump_trace = Some(PathBuf::from(value.trim())),
            "dump_centrality" => self.dump_centrality = parse_bool(k, value)?,
            "allow_out_of_range" => self.allow_out_of_range = parse_bool(k, value)?,
            _ => return Err(SimError::param(k, value, "unknown key")),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SimError::param(line, "", format!("line {}: expected key=value", lineno + 1))
            })?;
            self.set(key, value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        self.apply_file_text(&text)
    }

    /// Uses `value` as the seed unless one was set explicitly.
    pub fn apply_seed_fallback(&mut self, value: Option<&str>) -> Result<()> {
        if self.seed_set {
            return Ok(());
        }
        if let Some(v) = value {
            self.experiment.seed = parse_num(SEED_ENV, v)?;
        }
        Ok(())
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.seed_count as u64)
            .map(|i| self.experiment.seed.wrapping_add(i))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let exp = &self.experiment;
        exp.workload.validate()?;
        exp.link.validate()?;
        exp.strategy.validate()?;
        let w = exp.strategy.weights;
        Weights::new(w.connectivity, w.betweenness, w.eigenvector)?;
        if exp.cache_size == 0 {
            return Err(SimError::param("cache_size", 0, "must be at least 1"));
        }
        if self.seed_count == 0 {
            return Err(SimError::param("seeds", 0, "must be at least 1"));
        }
        if exp.workload.consumer_count + 1 > exp.nodes {
            return Err(SimError::param(
                "consumers",
                exp.workload.consumer_count,
                format!("at most {} consumers fit on {} nodes", exp.nodes.saturating_sub(1), exp.nodes),
            ));
        }
        let max_links = exp.nodes * exp.nodes.saturating_sub(1) / 2;
        if exp.links + 1 < exp.nodes || exp.links > max_links {
            return Err(SimError::param(
                "links",
                exp.links,
                format!("must lie in [{}, {max_links}] for {} nodes", exp.nodes.saturating_sub(1), exp.nodes),
            ));
        }
        if !self.allow_out_of_range {
            check_zipf_range(exp.workload.zipf_a)?;
            if self.sweep == Some(SweepParam::ZipfA) {
                self.sweep_values.iter().try_for_each(|&a| check_zipf_range(a))?;
            }
        }
        match (self.sweep, self.sweep_values.is_empty()) {
            (Some(p), true) => Err(SimError::param("sweep_values", "", format!("required by sweep over {}", p.name()))),
            (None, false) => Err(SimError::param("sweep_values", "", "given without --sweep")),
            _ => Ok(()),
        }
    }
}

fn check_zipf_range(a: f64) -> Result<()> {
    let (lo, hi) = ZIPF_A_RANGE;
    if (lo..=hi).contains(&a) {
        Ok(())
    } else {
        Err(SimError::param(
            "zipf_a",
            a,
            format!("outside the documented range {lo}..{hi} (pass --allow-out-of-range to permit)"),
        ))
    }
}
