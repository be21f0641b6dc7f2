//! Consumer request process: Zipf-Mandelbrot content choice, Poisson arrivals,
//! and placement of consumers and the origin server on the topology.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Result, SimError};
use crate::packet::ContentId;
use crate::rng::{stream_rng, SimRng, CONSUMER_STREAM_BASE, PLACEMENT_STREAM};
use crate::topology::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadConfig {
    pub catalog_size: usize,
    pub zipf_a: f64,
    pub zipf_q: f64,
    /// Interests per second per consumer.
    pub lambda_per_consumer: f64,
    pub consumer_count: usize,
    /// Arrival window in seconds.
    pub duration: f64,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        WorkloadConfig {
            catalog_size: 10_000,
            zipf_a: 0.7,
            zipf_q: 0.0,
            lambda_per_consumer: 100.0,
            consumer_count: 18,
            duration: 100.0,
        }
    }
}

impl WorkloadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.catalog_size == 0 {
            return Err(SimError::param("contents", self.catalog_size, "must be at least 1"));
        }
        if !(self.zipf_a >= 0.0) || !self.zipf_a.is_finite() {
            return Err(SimError::param("zipf_a", self.zipf_a, "must be a finite value >= 0"));
        }
        if !(self.zipf_q >= 0.0) || !self.zipf_q.is_finite() {
            return Err(SimError::param("zipf_q", self.zipf_q, "must be a finite value >= 0"));
        }
        if !(self.lambda_per_consumer > 0.0) || !self.lambda_per_consumer.is_finite() {
            return Err(SimError::param("lambda", self.lambda_per_consumer, "must be positive"));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(SimError::param("duration", self.duration, "must be positive"));
        }
        Ok(())
    }
}

/// Rank sampler with `p(r) ∝ 1 / (r + q)^a` over `r = 1..=N`.
#[derive(Debug, Clone)]
pub struct ZipfMandelbrot {
    cdf: Vec<f64>,
}

impl ZipfMandelbrot {
    pub fn new(catalog_size: usize, a: f64, q: f64) -> Result<Self> {
        if catalog_size == 0 {
            return Err(SimError::param("contents", catalog_size, "must be at least 1"));
        }
        let mut cdf = Vec::with_capacity(catalog_size);
        let mut acc = 0.0;
        for r in 1..=catalog_size {
            acc += (r as f64 + q).powf(-a);
            cdf.push(acc);
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        *cdf.last_mut().unwrap() = 1.0;
        Ok(ZipfMandelbrot { cdf })
    }

    pub fn catalog_size(&self) -> usize {
        self.cdf.len()
    }

    /// Probability of rank `r` (1-based).
    pub fn pmf(&self, r: usize) -> f64 {
        match r {
            0 => 0.0,
            1 => self.cdf[0],
            _ if r <= self.cdf.len() => self.cdf[r - 1] - self.cdf[r - 2],
            _ => 0.0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ContentId {
        let u: f64 = rng.random();
        // First index whose cumulative mass exceeds u.
        let idx = self.cdf.partition_point(|&c| c <= u);
        (idx.min(self.cdf.len() - 1) + 1) as ContentId
    }
}

pub fn zipf_mandelbrot_sample<R: Rng + ?Sized>(rng: &mut R, cfg: &WorkloadConfig) -> Result<ContentId> {
    Ok(ZipfMandelbrot::new(cfg.catalog_size, cfg.zipf_a, cfg.zipf_q)?.sample(rng))
}

/// Strictly increasing event times in `[0, duration)` with exponential gaps.
pub fn poisson_arrivals<R: Rng + ?Sized>(rng: &mut R, lambda: f64, duration: f64) -> Result<Vec<f64>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(SimError::param("lambda", lambda, "must be positive"));
    }
    let exp = Exp::new(lambda).map_err(|_| SimError::param("lambda", lambda, "must be positive"))?;
    let mut times = Vec::with_capacity((lambda * duration.max(0.0) * 1.1) as usize + 1);
    let mut t = 0.0;
    loop {
        let gap: f64 = exp.sample(rng);
        if gap <= 0.0 {
            continue;
        }
        t += gap;
        if t >= duration {
            return Ok(times);
        }
        times.push(t);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub server: NodeId,
    /// Attachment node of each consumer, in consumer order.
    pub consumers: Vec<NodeId>,
}

/// The server attaches to a uniformly random router; consumers take the
/// lowest-degree routers other than the server's (ties by node id).
pub fn place_consumers_and_server<R: Rng + ?Sized>(
    g: &Graph,
    consumer_count: usize,
    rng: &mut R,
) -> Result<Placement> {
    let n = g.node_count();
    if consumer_count + 1 > n {
        return Err(SimError::param(
            "consumers",
            consumer_count,
            format!("at most {} consumers fit on {n} nodes", n.saturating_sub(1)),
        ));
    }
    let server = rng.random_range(0..n);
    let mut candidates: Vec<NodeId> = (0..n).filter(|&v| v != server).collect();
    candidates.sort_by_key(|&v| (g.degree(v), v));
    candidates.truncate(consumer_count);
    Ok(Placement {
        server,
        consumers: candidates,
    })
}

/// Placement drawn from the run seed's placement stream.
pub fn seeded_placement(g: &Graph, consumer_count: usize, seed: u64) -> Result<Placement> {
    place_consumers_and_server(g, consumer_count, &mut stream_rng(seed, PLACEMENT_STREAM))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Request {
    pub time: f64,
    /// Index into the placement's consumer list.
    pub consumer: usize,
    pub node: NodeId,
    pub content: ContentId,
}

/// Every request of a run, ordered by time then consumer index.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestTrace {
    pub requests: Vec<Request>,
}

impl RequestTrace {
    /// Each consumer draws arrivals and content choices from its own stream.
    pub fn generate(cfg: &WorkloadConfig, consumers: &[NodeId], seed: u64) -> Result<Self> {
        cfg.validate()?;
        let zipf = ZipfMandelbrot::new(cfg.catalog_size, cfg.zipf_a, cfg.zipf_q)?;
        let mut requests = Vec::new();
        for (i, &node) in consumers.iter().enumerate() {
            let mut rng: SimRng = stream_rng(seed, CONSUMER_STREAM_BASE + i as u64);
            let times = poisson_arrivals(&mut rng, cfg.lambda_per_consumer, cfg.duration)?;
            requests.extend(times.into_iter().map(|time| Request {
                time,
                consumer: i,
                node,
                content: zipf.sample(&mut rng),
            }));
        }
        requests.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.consumer.cmp(&b.consumer)));
        Ok(RequestTrace { requests })
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    /// CSV with header `time_s,consumer_node,content_rank`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_s,consumer_node,content_rank\n");
        for r in &self.requests {
            let _ = writeln!(out, "{:.9},{},{}", r.time, r.node, r.content);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| SimError::io(path, e))
    }
}
