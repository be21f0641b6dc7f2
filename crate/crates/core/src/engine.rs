//! Deterministic discrete-event engine.
//!
//! Interests travel hop by hop toward the server along the lowest-id
//! shortest path; data retraces the PIT chain back to every waiting consumer.
//! Each router runs the configured admission policy when data passes through.
//! Time is kept in integer nanoseconds and ties are broken by insertion order,
//! so a run is a pure function of its inputs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::centrality::{CentralityTable, Weights};
use crate::error::{Result, SimError};
use crate::metrics::{MetricsAccumulator, MetricsReport, RunLabels, SatisfiedAt};
use crate::node::{DataAction, InterestAction, NodeState};
use crate::packet::{ContentId, Data, Face, Interest, Origin, RequestId};
use crate::rng::{stream_rng, SimRng, STRATEGY_STREAM};
use crate::strategy::{StrategyConfig, StrategyKind};
use crate::topology::{all_pairs_shortest_paths, generate_random_graph, Graph, NodeId, ShortestPathTable};
use crate::workload::{seeded_placement, Placement, RequestTrace, WorkloadConfig};

pub type Nanos = u64;

fn to_nanos(seconds: f64) -> Nanos {
    (seconds * 1e9).round() as Nanos
}

/// Fixed-latency links with no queueing.
///
/// Interest hops cost propagation plus `interest_packet_bits / bandwidth`;
/// data hops cost propagation plus `data_packet_bits / bandwidth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    /// Seconds.
    pub per_hop_delay: f64,
    /// Bits per second.
    pub bandwidth: f64,
    pub data_packet_bits: f64,
    pub interest_packet_bits: f64,
}

impl Default for LinkModel {
    fn default() -> Self {
        LinkModel {
            per_hop_delay: 0.010,
            bandwidth: 10e6,
            data_packet_bits: 8_000.0,
            interest_packet_bits: 0.0,
        }
    }
}

impl LinkModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.per_hop_delay >= 0.0) || !self.per_hop_delay.is_finite() {
            return Err(SimError::param("delay", self.per_hop_delay, "must be >= 0"));
        }
        if !(self.bandwidth > 0.0) || !self.bandwidth.is_finite() {
            return Err(SimError::param("bandwidth", self.bandwidth, "must be positive"));
        }
        if !(self.data_packet_bits >= 0.0) || !(self.interest_packet_bits >= 0.0) {
            return Err(SimError::param("packet_bits", self.data_packet_bits, "must be >= 0"));
        }
        if self.data_hop_latency() <= 0.0 {
            return Err(SimError::param("delay", self.per_hop_delay, "per-hop latency must be positive"));
        }
        Ok(())
    }

    /// Per-hop latency of a data packet in seconds.
    pub fn data_hop_latency(&self) -> f64 {
        self.per_hop_delay + self.data_packet_bits / self.bandwidth
    }

    pub fn interest_hop_latency(&self) -> f64 {
        self.per_hop_delay + self.interest_packet_bits / self.bandwidth
    }

    pub fn data_hop_nanos(&self) -> Nanos {
        to_nanos(self.data_hop_latency())
    }

    pub fn interest_hop_nanos(&self) -> Nanos {
        to_nanos(self.interest_hop_latency())
    }
}

/// Immutable per-topology inputs shared by every run on that topology.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub graph: Graph,
    pub spt: ShortestPathTable,
    pub centrality: CentralityTable,
    pub placement: Placement,
}

impl Scenario {
    pub fn new(graph: Graph, placement: Placement, weights: Weights) -> Result<Self> {
        let n = graph.node_count();
        if placement.server >= n || placement.consumers.iter().any(|&c| c >= n) {
            return Err(SimError::InvalidGraph("placement refers to a node outside the graph".into()));
        }
        let spt = all_pairs_shortest_paths(&graph);
        let centrality = CentralityTable::compute(&graph, weights)?;
        Ok(Scenario {
            graph,
            spt,
            centrality,
            placement,
        })
    }

    /// Random topology and placement, both derived from `seed`.
    pub fn random(nodes: usize, links: usize, consumers: usize, weights: Weights, seed: u64) -> Result<Self> {
        let graph = generate_random_graph(nodes, links, seed)?;
        let placement = seeded_placement(&graph, consumers, seed)?;
        Scenario::new(graph, placement, weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub strategy: StrategyConfig,
    pub link: LinkModel,
    pub cache_capacity: usize,
    pub aggregation: bool,
    pub seed: u64,
}

/// Anomalies observed during a run. A healthy run has all zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub orphan_data: u64,
    pub pit_leaks: u64,
    pub capacity_violations: u64,
    pub undelivered: u64,
    pub duplicate_deliveries: u64,
    pub wrong_content: u64,
    pub reverse_path_violations: u64,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        *self == Diagnostics::default()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "orphan_data={} pit_leaks={} capacity_violations={} undelivered={} duplicate_deliveries={} wrong_content={} reverse_path_violations={}",
            self.orphan_data,
            self.pit_leaks,
            self.capacity_violations,
            self.undelivered,
            self.duplicate_deliveries,
            self.wrong_content,
            self.reverse_path_violations
        )
    }
}

/// One consumer-level delivery, kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivery {
    pub request: RequestId,
    pub consumer_node: NodeId,
    pub content: ContentId,
    pub satisfied_at: Origin,
    pub hops: u64,
    pub latency_ns: Nanos,
    pub aggregated: bool,
    /// Routers the consumer's interest visited before it stopped.
    pub interest_trace: Vec<NodeId>,
    /// Routers the data visited from its origin to the consumer.
    pub data_trace: Vec<NodeId>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub metrics: MetricsAccumulator,
    pub diagnostics: Diagnostics,
    pub deliveries: Vec<Delivery>,
    /// Largest Content Store occupancy seen at any router.
    pub peak_store_len: usize,
    pub events_processed: u64,
    /// Router state at queue drain.
    pub nodes: Vec<NodeState>,
}

impl RunOutput {
    pub fn report(&self, labels: RunLabels) -> MetricsReport {
        self.metrics.report(labels)
    }

    /// Fails with the diagnostics if the run was not clean.
    pub fn check(self) -> Result<Self> {
        if self.diagnostics.is_clean() {
            Ok(self)
        } else {
            Err(SimError::Anomalies(self.diagnostics.to_string()))
        }
    }
}

enum EventKind {
    Issue(RequestId),
    /// Interest arriving at the last router of its trace.
    Interest(Interest),
    DataArrival { at: NodeId, data: Data },
}

struct Scheduled {
    time: Nanos,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    // Reversed: BinaryHeap is a max-heap and we want the earliest event.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.cmp(&self.time).then(other.seq.cmp(&self.seq))
    }
}

struct RequestState {
    consumer_node: NodeId,
    content: ContentId,
    issue_ns: Nanos,
    aggregated: bool,
    delivered: bool,
    interest_trace: Vec<NodeId>,
}

struct Simulation<'a> {
    scenario: &'a Scenario,
    cfg: &'a EngineConfig,
    nodes: Vec<NodeState>,
    queue: BinaryHeap<Scheduled>,
    seq: u64,
    network_max_path_count: u64,
    rng: SimRng,
    metrics: MetricsAccumulator,
    requests: Vec<RequestState>,
    diagnostics: Diagnostics,
    deliveries: Vec<Delivery>,
    peak_store_len: usize,
    interest_hop: Nanos,
    data_hop: Nanos,
}

impl<'a> Simulation<'a> {
    fn new(scenario: &'a Scenario, trace: &RequestTrace, catalog_size: usize, cfg: &'a EngineConfig) -> Result<Self> {
        let nodes = (0..scenario.graph.node_count())
            .map(|id| NodeState::new(id, cfg.cache_capacity, catalog_size, cfg.aggregation))
            .collect::<Result<Vec<_>>>()?;
        let mut sim = Simulation {
            scenario,
            cfg,
            nodes,
            queue: BinaryHeap::with_capacity(trace.len() + 1024),
            seq: 0,
            network_max_path_count: 0,
            rng: stream_rng(cfg.seed, STRATEGY_STREAM),
            metrics: MetricsAccumulator::default(),
            requests: Vec::with_capacity(trace.len()),
            diagnostics: Diagnostics::default(),
            deliveries: Vec::with_capacity(trace.len()),
            peak_store_len: 0,
            interest_hop: cfg.link.interest_hop_nanos(),
            data_hop: cfg.link.data_hop_nanos(),
        };
        for (id, req) in trace.requests.iter().enumerate() {
            if req.content == 0 || req.content as usize > catalog_size {
                return Err(SimError::MalformedPacket(format!(
                    "request for content {} outside catalog of {catalog_size}",
                    req.content
                )));
            }
            if req.node >= sim.nodes.len() {
                return Err(SimError::MalformedPacket(format!("request from unknown node {}", req.node)));
            }
            let issue_ns = to_nanos(req.time);
            sim.requests.push(RequestState {
                consumer_node: req.node,
                content: req.content,
                issue_ns,
                aggregated: false,
                delivered: false,
                interest_trace: Vec::new(),
            });
            sim.schedule(issue_ns, EventKind::Issue(id as RequestId));
        }
        Ok(sim)
    }

    fn schedule(&mut self, time: Nanos, kind: EventKind) {
        self.queue.push(Scheduled {
            time,
            seq: self.seq,
            kind,
        });
        self.seq += 1;
    }

    fn run(mut self) -> Result<RunOutput> {
        let mut events = 0u64;
        while let Some(Scheduled { time, kind, .. }) = self.queue.pop() {
            events += 1;
            match kind {
                EventKind::Issue(id) => {
                    self.metrics.record_issue();
                    let req = &self.requests[id as usize];
                    let interest = Interest {
                        content: req.content,
                        nonce: id,
                        origin_consumer: req.consumer_node,
                        path_trace: vec![req.consumer_node],
                        issue_time: req.issue_ns as f64 * 1e-9,
                    };
                    self.on_interest(interest, time)?;
                }
                EventKind::Interest(interest) => self.on_interest(interest, time)?,
                EventKind::DataArrival { at, data } => self.on_data(at, data, time),
            }
        }
        self.finish(events)
    }

    fn on_interest(&mut self, mut interest: Interest, now: Nanos) -> Result<()> {
        let at = *interest
            .path_trace
            .last()
            .ok_or_else(|| SimError::MalformedPacket("interest with empty path trace".into()))?;
        let action = self.nodes[at].process_interest(&interest, now as f64 * 1e-9)?;
        match action {
            InterestAction::ReturnData => {
                self.requests[interest.nonce as usize].interest_trace = interest.path_trace.clone();
                let data = Data {
                    content: interest.content,
                    nonce: interest.nonce,
                    origin: Origin::Cache(at),
                    path_trace: vec![at],
                };
                self.send_data(interest.arrival_face(), data, now);
            }
            InterestAction::Aggregate => {
                let req = &mut self.requests[interest.nonce as usize];
                req.aggregated = true;
                req.interest_trace = interest.path_trace;
            }
            InterestAction::Forward => {
                self.network_max_path_count = self.network_max_path_count.max(self.nodes[at].path_count());
                let server = self.scenario.placement.server;
                if at == server {
                    self.requests[interest.nonce as usize].interest_trace = interest.path_trace.clone();
                    let data = Data {
                        content: interest.content,
                        nonce: interest.nonce,
                        origin: Origin::Server(at),
                        path_trace: vec![at],
                    };
                    self.on_data(at, data, now);
                } else {
                    let next = self.scenario.spt.route_next_hop(at, server)?;
                    interest.path_trace.push(next);
                    self.schedule(now + self.interest_hop, EventKind::Interest(interest));
                }
            }
        }
        Ok(())
    }

    fn on_data(&mut self, at: NodeId, data: Data, now: Nanos) {
        let node = &self.nodes[at];
        let popularity = node.popularity(data.content);
        let node_value = self
            .scenario
            .centrality
            .node_value(at, node.connectivity(self.network_max_path_count));
        let verdict = self.cfg.strategy.decide(popularity, node_value, &mut self.rng);

        let node = &mut self.nodes[at];
        let action = node.process_data(&data, verdict);
        let len = node.store.len();
        if len > node.store.capacity() {
            self.diagnostics.capacity_violations += 1;
        }
        self.peak_store_len = self.peak_store_len.max(len);

        match action {
            DataAction::Dropped => self.diagnostics.orphan_data += 1,
            DataAction::DeliverDownstream(records) => {
                for record in records {
                    let copy = Data {
                        nonce: record.nonce,
                        ..data.clone()
                    };
                    self.send_data(record.face, copy, now);
                }
            }
        }
    }

    fn send_data(&mut self, face: Face, mut data: Data, now: Nanos) {
        match face {
            Face::Consumer(id) => self.deliver(id, data, now),
            Face::Node(next) => {
                data.path_trace.push(next);
                self.schedule(now + self.data_hop, EventKind::DataArrival { at: next, data });
            }
        }
    }

    fn deliver(&mut self, id: RequestId, data: Data, now: Nanos) {
        let req = &mut self.requests[id as usize];
        if req.delivered {
            self.diagnostics.duplicate_deliveries += 1;
            return;
        }
        req.delivered = true;
        if data.content != req.content {
            self.diagnostics.wrong_content += 1;
        }
        if !req.aggregated && !data.path_trace.iter().rev().eq(req.interest_trace.iter()) {
            self.diagnostics.reverse_path_violations += 1;
        }
        let hops = data.hop_count() as u64;
        let latency_ns = now - req.issue_ns;
        let satisfied_at = if data.origin.is_cache() {
            SatisfiedAt::Cache
        } else {
            SatisfiedAt::Server
        };
        self.metrics.record_delivery(satisfied_at, hops, latency_ns);
        self.deliveries.push(Delivery {
            request: id,
            consumer_node: req.consumer_node,
            content: req.content,
            satisfied_at: data.origin,
            hops,
            latency_ns,
            aggregated: req.aggregated,
            interest_trace: std::mem::take(&mut req.interest_trace),
            data_trace: data.path_trace,
        });
    }

    fn finish(mut self, events: u64) -> Result<RunOutput> {
        self.diagnostics.pit_leaks = self.nodes.iter().map(|n| n.pit.len() as u64).sum();
        self.diagnostics.undelivered = self.requests.iter().filter(|r| !r.delivered).count() as u64;
        self.deliveries.sort_by_key(|d| d.request);
        Ok(RunOutput {
            metrics: self.metrics,
            diagnostics: self.diagnostics,
            deliveries: self.deliveries,
            peak_store_len: self.peak_store_len,
            events_processed: events,
            nodes: self.nodes,
        })
    }
}

/// Replays an explicit request trace. Anomalies are reported in the output's
/// diagnostics rather than as an error.
pub fn run_trace(scenario: &Scenario, trace: &RequestTrace, catalog_size: usize, cfg: &EngineConfig) -> Result<RunOutput> {
    cfg.strategy.validate()?;
    cfg.link.validate()?;
    Simulation::new(scenario, trace, catalog_size, cfg)?.run()
}

/// Generates the run's request trace from `cfg.seed` and simulates it to
/// queue drain. Any anomaly fails the run.
pub fn run(scenario: &Scenario, workload: &WorkloadConfig, cfg: &EngineConfig) -> Result<RunOutput> {
    workload.validate()?;
    let trace = RequestTrace::generate(workload, &scenario.placement.consumers, cfg.seed)?;
    run_trace(scenario, &trace, workload.catalog_size, cfg)?.check()
}

/// Everything needed to reproduce one run from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Experiment {
    pub nodes: usize,
    pub links: usize,
    pub workload: WorkloadConfig,
    pub strategy: StrategyConfig,
    pub link: LinkModel,
    pub cache_size: usize,
    pub aggregation: bool,
    pub seed: u64,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            nodes: 50,
            links: 150,
            workload: WorkloadConfig::default(),
            strategy: StrategyConfig::new(StrategyKind::Nvcp),
            link: LinkModel::default(),
            cache_size: 1_000,
            aggregation: true,
            seed: 1,
        }
    }
}

impl Experiment {
    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::random(
            self.nodes,
            self.links,
            self.workload.consumer_count,
            self.strategy.weights,
            self.seed,
        )
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            strategy: self.strategy,
            link: self.link,
            cache_capacity: self.cache_size,
            aggregation: self.aggregation,
            seed: self.seed,
        }
    }

    pub fn labels(&self) -> RunLabels {
        RunLabels {
            strategy: self.strategy.kind,
            cache_size: self.cache_size,
            zipf_a: self.workload.zipf_a,
            seed: self.seed,
        }
    }

    pub fn run_on(&self, scenario: &Scenario) -> Result<MetricsReport> {
        Ok(run(scenario, &self.workload, &self.engine_config())?.report(self.labels()))
    }

    pub fn run(&self) -> Result<MetricsReport> {
        self.run_on(&self.scenario()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    CacheSize,
    ZipfA,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::CacheSize => "cache_size",
            SweepParam::ZipfA => "zipf_a",
        }
    }

    pub fn apply(&self, exp: &mut Experiment, value: f64) -> Result<()> {
        match self {
            SweepParam::CacheSize => {
                if !(value >= 1.0) || value.fract() != 0.0 {
                    return Err(SimError::param("cache_size", value, "must be a positive integer"));
                }
                exp.cache_size = value as usize;
            }
            SweepParam::ZipfA => exp.workload.zipf_a = value,
        }
        Ok(())
    }
}

impl std::str::FromStr for SweepParam {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "cache_size" => Ok(SweepParam::CacheSize),
            "zipf_a" => Ok(SweepParam::ZipfA),
            _ => Err(SimError::param("sweep", s, "expected cache_size or zipf_a")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub experiment: Experiment,
    pub result: Result<MetricsReport>,
}

/// One run per (value, strategy, seed), in that nesting order.
///
/// Cells run in parallel; the topology for each seed is built once and shared.
/// A failing cell is reported in its row without stopping the others.
pub fn sweep(
    base: &Experiment,
    param: SweepParam,
    values: &[f64],
    strategies: &[StrategyKind],
    seeds: &[u64],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() || strategies.is_empty() || seeds.is_empty() {
        return Err(SimError::param("sweep", "", "values, strategies, and seeds must be nonempty"));
    }
    let mut cells = Vec::with_capacity(values.len() * strategies.len() * seeds.len());
    for &value in values {
        for &kind in strategies {
            for &seed in seeds {
                let mut exp = *base;
                exp.strategy.kind = kind;
                exp.seed = seed;
                let applied = param.apply(&mut exp, value);
                cells.push((exp, applied));
            }
        }
    }

    let scenarios: HashMap<u64, Result<Scenario>> = seeds
        .par_iter()
        .map(|&seed| (seed, Experiment { seed, ..*base }.scenario()))
        .collect();

    Ok(cells
        .into_par_iter()
        .map(|(exp, applied)| {
            let result = applied.and_then(|_| match &scenarios[&exp.seed] {
                Ok(scenario) => exp.run_on(scenario),
                Err(e) => Err(e.clone()),
            });
            SweepRow {
                experiment: exp,
                result,
            }
        })
        .collect())
}
