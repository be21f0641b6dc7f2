use std::collections::HashMap;

use ccnsim::engine::{run, run_trace, EngineConfig, LinkModel, Scenario};
use ccnsim::packet::Origin;
use ccnsim::strategy::{StrategyConfig, StrategyKind};
use ccnsim::{Experiment, RequestTrace, Weights, WorkloadConfig};
use proptest::prelude::*;

fn small_workload(catalog: usize, consumers: usize, lambda: f64, duration: f64) -> WorkloadConfig {
    WorkloadConfig {
        catalog_size: catalog,
        consumer_count: consumers,
        lambda_per_consumer: lambda,
        duration,
        ..WorkloadConfig::default()
    }
}

fn engine(kind: StrategyKind, cache: usize, aggregation: bool, link: LinkModel, seed: u64) -> EngineConfig {
    EngineConfig {
        strategy: StrategyConfig::new(kind),
        link,
        cache_capacity: cache,
        aggregation,
        seed,
    }
}

fn kind_strategy() -> impl Strategy<Value = StrategyKind> {
    prop::sample::select(StrategyKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_interest_is_answered_once(
        n in 6usize..20, extra in 0usize..20, cache in 1usize..40,
        kind in kind_strategy(), aggregation in any::<bool>(), seed in 0u64..1_000,
    ) {
        let links = (n - 1 + extra).min(n * (n - 1) / 2);
        let scenario = Scenario::random(n, links, 4, Weights::equal(), seed).unwrap();
        let wl = small_workload(200, 4, 20.0, 2.0);
        let out = run(&scenario, &wl, &engine(kind, cache, aggregation, LinkModel::default(), seed)).unwrap();
        let trace = RequestTrace::generate(&wl, &scenario.placement.consumers, seed).unwrap();
        prop_assert!(out.diagnostics.is_clean(), "{}", out.diagnostics);
        prop_assert_eq!(out.metrics.interests_issued, trace.len() as u64);
        prop_assert_eq!(out.metrics.delivered, out.metrics.interests_issued);
        prop_assert_eq!(out.deliveries.len(), trace.len());
        prop_assert!(out.peak_store_len <= cache);
        for (d, req) in out.deliveries.iter().zip(&trace.requests) {
            prop_assert_eq!(d.content, req.content);
            prop_assert_eq!(d.consumer_node, req.node);
        }
        let hits = out.deliveries.iter().filter(|d| d.satisfied_at.is_cache()).count() as u64;
        prop_assert_eq!(hits, out.metrics.cache_hits);
    }

    #[test]
    fn latency_is_hops_times_round_trip_without_aggregation(
        n in 6usize..20, extra in 0usize..20, cache in 1usize..40,
        kind in kind_strategy(), seed in 0u64..1_000, delay_ms in 1u32..50,
    ) {
        let links = (n - 1 + extra).min(n * (n - 1) / 2);
        let scenario = Scenario::random(n, links, 4, Weights::equal(), seed).unwrap();
        let link = LinkModel { per_hop_delay: delay_ms as f64 * 1e-3, ..LinkModel::default() };
        let wl = small_workload(200, 4, 20.0, 2.0);
        let out = run(&scenario, &wl, &engine(kind, cache, false, link, seed)).unwrap();
        let per_round = link.interest_hop_nanos() + link.data_hop_nanos();
        for d in &out.deliveries {
            prop_assert!(!d.aggregated);
            prop_assert_eq!(d.latency_ns, d.hops * per_round);
            prop_assert_eq!(d.hops as usize, d.interest_trace.len() - 1);
            let mut back = d.data_trace.clone();
            back.reverse();
            prop_assert_eq!(&back, &d.interest_trace);
            prop_assert_eq!(d.interest_trace[0], d.consumer_node);
            let end = *d.interest_trace.last().unwrap();
            match d.satisfied_at {
                Origin::Server(s) => prop_assert_eq!(s, end),
                Origin::Cache(c) => prop_assert_eq!(c, end),
            }
            prop_assert!(d.interest_trace.windows(2).all(|w| scenario.graph.is_adjacent(w[0], w[1])));
        }
    }

    #[test]
    fn request_counters_match_forwarding(
        n in 6usize..16, extra in 0usize..15, cache in 1usize..30,
        kind in kind_strategy(), seed in 0u64..1_000,
    ) {
        let links = (n - 1 + extra).min(n * (n - 1) / 2);
        let scenario = Scenario::random(n, links, 3, Weights::equal(), seed).unwrap();
        let wl = small_workload(50, 3, 20.0, 2.0);
        let out = run(&scenario, &wl, &engine(kind, cache, false, LinkModel::default(), seed)).unwrap();
        let mut forwards: HashMap<u32, u64> = HashMap::new();
        let mut total = 0u64;
        for d in &out.deliveries {
            let f = match d.satisfied_at {
                Origin::Server(_) => d.interest_trace.len(),
                Origin::Cache(_) => d.interest_trace.len() - 1,
            } as u64;
            *forwards.entry(d.content).or_default() += f;
            total += f;
        }
        for k in 1..=50u32 {
            let counted: u64 = out.nodes.iter().map(|v| v.request_count(k) as u64).sum();
            prop_assert_eq!(counted, forwards.get(&k).copied().unwrap_or(0));
        }
        prop_assert_eq!(out.nodes.iter().map(|v| v.path_count()).sum::<u64>(), total);
        for v in &out.nodes {
            let max = (1..=50u32).map(|k| v.request_count(k)).max().unwrap();
            prop_assert_eq!(v.max_request_count(), max);
        }
    }

    #[test]
    fn runs_are_deterministic(seed in 0u64..1_000, kind in kind_strategy()) {
        let exp = Experiment {
            nodes: 15,
            links: 30,
            workload: small_workload(300, 5, 20.0, 2.0),
            cache_size: 20,
            strategy: StrategyConfig::new(kind),
            seed,
            ..Experiment::default()
        };
        prop_assert_eq!(exp.run().unwrap(), exp.run().unwrap());
    }
}

#[test]
fn symmetric_link_latency_is_twice_hops_times_per_hop() {
    let exp = Experiment {
        nodes: 20,
        links: 40,
        workload: small_workload(500, 6, 50.0, 2.0),
        cache_size: 30,
        aggregation: false,
        link: LinkModel {
            interest_packet_bits: 8_000.0,
            ..LinkModel::default()
        },
        ..Experiment::default()
    };
    let r = exp.run().unwrap();
    let per_hop = exp.link.data_hop_latency();
    assert!((r.avg_latency - 2.0 * r.avg_hop_count * per_hop).abs() < 1e-9);
}

#[test]
fn no_caching_means_no_hits() {
    for seed in 0..5 {
        let mut strategy = StrategyConfig::new(StrategyKind::Prob);
        strategy.prob_p = 0.0;
        let exp = Experiment {
            nodes: 20,
            links: 40,
            workload: small_workload(500, 6, 50.0, 2.0),
            cache_size: 30,
            strategy,
            seed,
            ..Experiment::default()
        };
        let r = exp.run().unwrap();
        assert_eq!(r.cache_hits, 0);
        assert_eq!(r.hit_ratio, 0.0);
        assert!(r.avg_hop_count >= 1.0);
    }
}

#[test]
fn strategies_share_topology_and_trace() {
    let base = Experiment {
        nodes: 20,
        links: 40,
        workload: small_workload(500, 6, 50.0, 2.0),
        cache_size: 30,
        ..Experiment::default()
    };
    let scenario = base.scenario().unwrap();
    let trace = RequestTrace::generate(&base.workload, &scenario.placement.consumers, base.seed).unwrap();
    for kind in StrategyKind::ALL {
        let mut exp = base;
        exp.strategy.kind = kind;
        let direct = exp.run().unwrap();
        let out = run_trace(&scenario, &trace, base.workload.catalog_size, &exp.engine_config()).unwrap();
        assert_eq!(out.report(exp.labels()), direct);
    }
}
