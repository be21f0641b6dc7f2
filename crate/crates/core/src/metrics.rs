//! Per-run tallies: cache hit ratio, average hop count, average latency.

use crate::strategy::StrategyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatisfiedAt {
    Cache,
    Server,
}

/// Running sums for one run. Latencies are summed in integer nanoseconds so
/// the averages do not depend on delivery order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricsAccumulator {
    pub interests_issued: u64,
    pub delivered: u64,
    pub cache_hits: u64,
    pub hop_sum: u64,
    pub latency_sum_ns: u128,
}

impl MetricsAccumulator {
    pub fn record_issue(&mut self) {
        self.interests_issued += 1;
    }

    pub fn record_delivery(&mut self, satisfied_at: SatisfiedAt, hops: u64, latency_ns: u64) {
        self.delivered += 1;
        if satisfied_at == SatisfiedAt::Cache {
            self.cache_hits += 1;
        }
        self.hop_sum += hops;
        self.latency_sum_ns += latency_ns as u128;
    }

    pub fn hit_ratio(&self) -> f64 {
        ratio(self.cache_hits as f64, self.interests_issued)
    }

    pub fn avg_hop_count(&self) -> f64 {
        ratio(self.hop_sum as f64, self.delivered)
    }

    /// Seconds.
    pub fn avg_latency(&self) -> f64 {
        ratio(self.latency_sum_ns as f64 * 1e-9, self.delivered)
    }

    pub fn merge(&mut self, other: &MetricsAccumulator) {
        self.interests_issued += other.interests_issued;
        self.delivered += other.delivered;
        self.cache_hits += other.cache_hits;
        self.hop_sum += other.hop_sum;
        self.latency_sum_ns += other.latency_sum_ns;
    }

    pub fn report(&self, labels: RunLabels) -> MetricsReport {
        MetricsReport {
            labels,
            interests_issued: self.interests_issued,
            delivered: self.delivered,
            cache_hits: self.cache_hits,
            hit_ratio: self.hit_ratio(),
            avg_hop_count: self.avg_hop_count(),
            avg_latency: self.avg_latency(),
        }
    }
}

fn ratio(num: f64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunLabels {
    pub strategy: StrategyKind,
    pub cache_size: usize,
    pub zipf_a: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub labels: RunLabels,
    pub interests_issued: u64,
    pub delivered: u64,
    pub cache_hits: u64,
    pub hit_ratio: f64,
    pub avg_hop_count: f64,
    /// Seconds.
    pub avg_latency: f64,
}

/// Across-seed mean and sample standard deviation of one metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
}

pub fn summarize(values: impl IntoIterator<Item = f64>) -> Summary {
    let v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return Summary { mean: 0.0, stddev: 0.0 };
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let stddev = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    Summary { mean, stddev }
}
