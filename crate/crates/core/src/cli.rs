//! Batch front end: flag parsing, experiment orchestration, CSV output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::config::{RunConfig, SEED_ENV};
use crate::engine::{sweep, SweepParam, SweepRow};
use crate::error::{Result, SimError};
use crate::metrics::MetricsReport;
use crate::workload::RequestTrace;

pub const CSV_HEADER: &str = "strategy,cache_size,zipf_a,seed,interests,hit_ratio,avg_hops,avg_latency_s";

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "ccnsim", version, about = "In-network caching simulator for content-centric networks")]
pub struct Cli {
    /// Flat key=value config file; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub links: Option<usize>,
    #[arg(long)]
    pub contents: Option<usize>,
    #[arg(long)]
    pub consumers: Option<usize>,
    #[arg(long)]
    pub cache_size: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub zipf_a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub zipf_q: Option<f64>,
    /// Interests per second per consumer.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Arrival window in seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Per-hop propagation delay in milliseconds.
    #[arg(long)]
    pub delay_ms: Option<f64>,
    #[arg(long)]
    pub bandwidth_mbps: Option<f64>,
    #[arg(long)]
    pub data_bits: Option<f64>,
    #[arg(long)]
    pub interest_bits: Option<f64>,
    /// Forward every interest instead of collapsing pending ones in the PIT.
    #[arg(long)]
    pub no_aggregation: bool,
    /// nvcp, lce, prob, mpc, a comma-separated list, or `all`.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub prob_p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mpc_threshold: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Master seed; falls back to $CCNSIM_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds to run.
    #[arg(long, value_name = "N")]
    pub seeds: Option<usize>,
    #[arg(long, value_name = "cache_size|zipf_a")]
    pub sweep: Option<String>,
    #[arg(long, value_name = "V1,V2,...")]
    pub sweep_values: Option<String>,
    /// CSV output path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the first seed's request trace as CSV.
    #[arg(long, value_name = "PATH")]
    pub dump_trace: Option<PathBuf>,
    /// Print per-node betweenness and eigenvector centrality to stderr.
    #[arg(long)]
    pub dump_centrality: bool,
    #[arg(long)]
    pub allow_out_of_range: bool,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut kv: Vec<(&'static str, String)> = Vec::new();
        macro_rules! opt {
            ($($field:ident => $key:literal),* $(,)?) => {
                $(if let Some(v) = &self.$field { kv.push(($key, v.to_string())); })*
            };
        }
        opt!(
            nodes => "nodes",
            links => "links",
            contents => "contents",
            consumers => "consumers",
            cache_size => "cache_size",
            zipf_a => "zipf_a",
            zipf_q => "zipf_q",
            lambda => "lambda",
            duration => "duration",
            delay_ms => "delay_ms",
            bandwidth_mbps => "bandwidth_mbps",
            data_bits => "data_bits",
            interest_bits => "interest_bits",
            strategy => "strategy",
            prob_p => "prob_p",
            mpc_threshold => "mpc_threshold",
            alpha => "alpha",
            beta => "beta",
            gamma => "gamma",
            seed => "seed",
            seeds => "seeds",
            sweep => "sweep",
            sweep_values => "sweep_values",
        );
        if let Some(p) = &self.out {
            kv.push(("out", p.display().to_string()));
        }
        if let Some(p) = &self.dump_trace {
            kv.push(("dump_trace", p.display().to_string()));
        }
        if self.no_aggregation {
            kv.push(("aggregation", "false".into()));
        }
        if self.dump_centrality {
            kv.push(("dump_centrality", "true".into()));
        }
        if self.allow_out_of_range {
            kv.push(("allow_out_of_range", "true".into()));
        }
        kv
    }
}

/// Defaults, then the config file, then flags; the seed falls back to
/// `env_seed` when neither the file nor the flags set it.
pub fn parse_config(cli: &Cli, env_seed: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    for (key, value) in cli.overrides() {
        cfg.set(key, &value)?;
    }
    cfg.apply_seed_fallback(env_seed)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Header plus one row per report, reals at six decimals.
pub fn emit_csv(reports: &[MetricsReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{:.6},{},{},{:.6},{:.6},{:.6}",
            r.labels.strategy,
            r.labels.cache_size,
            r.labels.zipf_a,
            r.labels.seed,
            r.interests_issued,
            r.hit_ratio,
            r.avg_hop_count,
            r.avg_latency
        );
    }
    out
}

pub fn write_csv(path: &Path, reports: &[MetricsReport]) -> Result<()> {
    std::fs::write(path, emit_csv(reports)).map_err(|e| SimError::io(path, e))
}

#[derive(Debug)]
pub struct Outcome {
    pub rows: Vec<SweepRow>,
}

impl Outcome {
    pub fn reports(&self) -> Vec<MetricsReport> {
        self.rows.iter().filter_map(|r| r.result.as_ref().ok().cloned()).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.result.is_err())
    }

    pub fn all_ok(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Runs every configured cell. A plain run is a one-value sweep over the
/// configured cache size.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let base = &cfg.experiment;
    let (param, values) = match cfg.sweep {
        Some(p) => (p, cfg.sweep_values.clone()),
        None => (SweepParam::CacheSize, vec![base.cache_size as f64]),
    };
    let rows = sweep(base, param, &values, &cfg.strategies, &cfg.seeds())?;
    Ok(Outcome { rows })
}

/// Side outputs requested by flags: the request trace and centrality dump.
pub fn write_side_outputs(cfg: &RunConfig, diag: &mut dyn std::io::Write) -> Result<()> {
    if cfg.dump_trace.is_none() && !cfg.dump_centrality {
        return Ok(());
    }
    let scenario = cfg.experiment.scenario()?;
    if let Some(path) = &cfg.dump_trace {
        let trace = RequestTrace::generate(
            &cfg.experiment.workload,
            &scenario.placement.consumers,
            cfg.experiment.seed,
        )?;
        trace.write_csv(path)?;
    }
    if cfg.dump_centrality {
        let _ = write!(
            diag,
            "# seed {} server {} consumers {:?}\n{}",
            cfg.experiment.seed,
            scenario.placement.server,
            scenario.placement.consumers,
            scenario.centrality.to_csv()
        );
    }
    Ok(())
}

/// Full CLI flow. Returns the process exit code: 0 iff every run completed
/// without anomalies.
pub fn main_with(cli: &Cli, env_seed: Option<&str>, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32 {
    let cfg = match parse_config(cli, env_seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    if let Err(e) = write_side_outputs(&cfg, stderr) {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    for row in outcome.failures() {
        let e = &row.experiment;
        if let Err(err) = &row.result {
            let _ = writeln!(
                stderr,
                "run failed (strategy={} cache_size={} zipf_a={} seed={}): {err}",
                e.strategy.kind, e.cache_size, e.workload.zipf_a, e.seed
            );
        }
    }
    let reports = outcome.reports();
    let written = match &cfg.out {
        Some(path) => write_csv(path, &reports),
        None => stdout
            .write_all(emit_csv(&reports).as_bytes())
            .map_err(|e| SimError::io("<stdout>", e)),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    if outcome.all_ok() {
        0
    } else {
        1
    }
}

pub fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}
