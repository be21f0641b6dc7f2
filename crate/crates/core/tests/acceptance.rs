//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.
//!
//! Run with `cargo test -p ccnsim --test acceptance -- --nocapture`.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ccnsim::centrality::{betweenness_centrality, eigenvector_centrality, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ccnsim::engine::{run_trace, Diagnostics, Scenario};
use ccnsim::metrics::summarize;
use ccnsim::rng::stream_rng;
use ccnsim::strategy::StrategyKind;
use ccnsim::workload::{poisson_arrivals, ZipfMandelbrot};
use ccnsim::{Experiment, MetricsReport, RequestTrace};
use common::{brute_force_betweenness, rayleigh_residual, small_graphs};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const SWEEP_SEEDS: [u64; 3] = [1, 2, 3];
const CACHE_SIZES: [usize; 5] = [100, 500, 1000, 1500, 2000];

fn verdict(n: u32, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

/// One run with everything the conservation check needs.
#[derive(Debug)]
struct Cell {
    report: MetricsReport,
    diagnostics: Diagnostics,
    trace_len: u64,
    peak_store_len: usize,
    cache_size: usize,
    elapsed: Duration,
}

fn run_cell(exp: &Experiment, scenario: &Scenario) -> Cell {
    let start = Instant::now();
    let trace = RequestTrace::generate(&exp.workload, &scenario.placement.consumers, exp.seed).unwrap();
    let out = run_trace(scenario, &trace, exp.workload.catalog_size, &exp.engine_config()).unwrap();
    Cell {
        report: out.report(exp.labels()),
        diagnostics: out.diagnostics,
        trace_len: trace.len() as u64,
        peak_store_len: out.peak_store_len,
        cache_size: exp.cache_size,
        elapsed: start.elapsed(),
    }
}

/// Runs every (cache size, strategy, seed) at otherwise default settings.
fn grid(cache_sizes: &[usize], seeds: &[u64]) -> Vec<Cell> {
    let scenarios: Vec<Scenario> = seeds
        .iter()
        .map(|&seed| Experiment { seed, ..Experiment::default() }.scenario().unwrap())
        .collect();
    let mut jobs = Vec::new();
    for &cache_size in cache_sizes {
        for kind in StrategyKind::ALL {
            for (i, &seed) in seeds.iter().enumerate() {
                let mut exp = Experiment { seed, cache_size, ..Experiment::default() };
                exp.strategy.kind = kind;
                jobs.push((exp, i));
            }
        }
    }
    jobs.into_par_iter().map(|(exp, i)| run_cell(&exp, &scenarios[i])).collect()
}

fn default_runs() -> &'static [Cell] {
    static RUNS: OnceLock<Vec<Cell>> = OnceLock::new();
    RUNS.get_or_init(|| grid(&[Experiment::default().cache_size], &SEEDS))
}

fn sweep_runs() -> &'static [Cell] {
    static RUNS: OnceLock<Vec<Cell>> = OnceLock::new();
    RUNS.get_or_init(|| grid(&CACHE_SIZES, &SWEEP_SEEDS))
}

#[derive(Debug, Clone, Copy)]
struct Means {
    hit_ratio: f64,
    hops: f64,
    latency: f64,
}

fn means(cells: &[Cell], kind: StrategyKind, cache_size: usize) -> Means {
    let sel: Vec<&Cell> = cells
        .iter()
        .filter(|c| c.report.labels.strategy == kind && c.cache_size == cache_size)
        .collect();
    assert!(!sel.is_empty());
    Means {
        hit_ratio: summarize(sel.iter().map(|c| c.report.hit_ratio)).mean,
        hops: summarize(sel.iter().map(|c| c.report.avg_hop_count)).mean,
        latency: summarize(sel.iter().map(|c| c.report.avg_latency)).mean,
    }
}

const BASELINES: [StrategyKind; 3] = [StrategyKind::Lce, StrategyKind::Prob, StrategyKind::Mpc];

#[test]
fn criterion_1_centrality_oracles() {
    let start = Instant::now();
    let mut worst_b = 0.0f64;
    let mut worst_r = 0.0f64;
    let graphs = small_graphs(200);
    for g in &graphs {
        assert!(g.node_count() <= 8);
        let fast = betweenness_centrality(g).unwrap();
        for (a, b) in fast.iter().zip(brute_force_betweenness(g)) {
            worst_b = worst_b.max((a - b).abs());
        }
        let e = eigenvector_centrality(g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        worst_r = worst_r.max(rayleigh_residual(g, &e.scores, e.eigenvalue));
    }
    let elapsed = start.elapsed();
    let ok = worst_b <= 1e-9 && worst_r <= 1e-6 && elapsed < Duration::from_secs(10);
    verdict(
        1,
        ok,
        format!(
            "graphs={} max|betweenness-brute|={worst_b:.2e} max residual={worst_r:.2e} time={:.2}s",
            graphs.len(),
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_2_hit_ratio_ordering() {
    let runs = default_runs();
    let cache = Experiment::default().cache_size;
    let nvcp = means(runs, StrategyKind::Nvcp, cache);
    let mut detail = format!("nvcp={:.4}", nvcp.hit_ratio);
    let mut ok = true;
    let mut best = f64::MIN;
    for kind in BASELINES {
        let m = means(runs, kind, cache);
        detail += &format!(" {kind}={:.4}", m.hit_ratio);
        ok &= nvcp.hit_ratio > m.hit_ratio;
        best = best.max(m.hit_ratio);
    }
    let gap = nvcp.hit_ratio - best;
    ok &= gap >= 0.03;
    let slowest = runs.iter().map(|c| c.elapsed).max().unwrap();
    ok &= slowest < Duration::from_secs(120);
    detail += &format!(
        " gap_vs_best={gap:+.4} (need >= +0.0300) seeds={} slowest_run={:.2}s",
        SEEDS.len(),
        slowest.as_secs_f64()
    );
    verdict(2, ok, detail);
    assert!(ok, "hit ratio ordering not met");
}

#[test]
fn criterion_3_hop_and_latency_ordering() {
    let runs = default_runs();
    let cache = Experiment::default().cache_size;
    let nvcp = means(runs, StrategyKind::Nvcp, cache);
    let mut detail = format!("nvcp hops={:.4} latency={:.6}s", nvcp.hops, nvcp.latency);
    let mut ok = true;
    let mut best_hops = f64::MAX;
    for kind in BASELINES {
        let m = means(runs, kind, cache);
        detail += &format!(" | {kind} hops={:.4} latency={:.6}s", m.hops, m.latency);
        ok &= nvcp.hops < m.hops && nvcp.latency < m.latency;
        best_hops = best_hops.min(m.hops);
    }
    let reduction = best_hops - nvcp.hops;
    ok &= (0.02..=0.5).contains(&reduction);
    detail += &format!(" | hop reduction vs best={reduction:+.4} (need 0.02..0.5)");
    verdict(3, ok, detail);
    assert!(ok, "hop/latency ordering not met");
}

#[test]
fn criterion_4_cache_size_monotonicity() {
    let runs = sweep_runs();
    let tol = 0.005;
    let mut ok = true;
    let mut worst = 0.0f64;
    for kind in StrategyKind::ALL {
        let series: Vec<Means> = CACHE_SIZES.iter().map(|&c| means(runs, kind, c)).collect();
        for w in series.windows(2) {
            let drops = [
                w[0].hit_ratio - w[1].hit_ratio,
                w[1].hops - w[0].hops,
                // Latency in seconds; compared at hop scale via the per-hop round trip.
                (w[1].latency - w[0].latency) / (Experiment::default().link.data_hop_latency() * 2.0),
            ];
            for d in drops {
                worst = worst.max(d);
                ok &= d <= tol;
            }
        }
        println!(
            "  {kind}: hit {:?}",
            series.iter().map(|m| format!("{:.4}", m.hit_ratio)).collect::<Vec<_>>()
        );
    }
    verdict(
        4,
        ok,
        format!("sizes={CACHE_SIZES:?} seeds={} worst step violation={worst:.4} (tol {tol})", SWEEP_SEEDS.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_5_workload_fidelity() {
    let n = 100;
    let draws = 100_000;
    let z = ZipfMandelbrot::new(n, 0.7, 0.0).unwrap();
    let mut rng = stream_rng(2024, 0);
    let mut counts = vec![0u64; n];
    for _ in 0..draws {
        counts[z.sample(&mut rng) as usize - 1] += 1;
    }
    let norm: f64 = (1..=n).map(|r| (r as f64).powf(-0.7)).sum();
    let stat: f64 = counts
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let e = ((i + 1) as f64).powf(-0.7) / norm * draws as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let crit = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(0.99);
    let arrivals = poisson_arrivals(&mut stream_rng(2024, 1), 100.0, 100.0).unwrap().len();
    let ok = stat < crit && (9_700..=10_300).contains(&arrivals);
    verdict(5, ok, format!("chi2={stat:.2} critical={crit:.2} poisson_count={arrivals}"));
    assert!(ok);
}

#[test]
fn criterion_6_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_ccnsim");
    let dir = tempfile::tempdir().unwrap();
    let args = ["--strategy", "all", "--seed", "17", "--duration", "10", "--seeds", "2"];
    let mut outputs = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("--out")
            .arg(&path)
            .env_remove("CCNSIM_SEED")
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(path).unwrap());
    }
    let rows = String::from_utf8_lossy(&outputs[0]).lines().count() - 1;
    let ok = outputs[0] == outputs[1] && rows == 8;
    verdict(6, ok, format!("rows={rows} bytes={} identical={}", outputs[0].len(), outputs[0] == outputs[1]));
    assert!(ok);
}

#[test]
fn criterion_7_conservation() {
    let cells: Vec<&Cell> = default_runs().iter().chain(sweep_runs()).collect();
    let mut bad = Vec::new();
    for c in &cells {
        let d = &c.diagnostics;
        let conserved = c.report.interests_issued == c.trace_len && c.report.delivered == c.report.interests_issued;
        if !(conserved && d.is_clean() && d.pit_leaks == 0 && d.capacity_violations == 0 && c.peak_store_len <= c.cache_size) {
            bad.push(format!("{:?}: {d}", c.report.labels));
        }
    }
    let interests: u64 = cells.iter().map(|c| c.report.interests_issued).sum();
    verdict(7, bad.is_empty(), format!("runs={} interests={interests} anomalous_runs={}", cells.len(), bad.len()));
    assert!(bad.is_empty(), "{bad:#?}");
}
