//! Latency metrics computed exactly from a simulated sample path.
//!
//! The age process is a sawtooth: slope one between receptions, dropping to
//! `now - gen_time` when a packet fresher than everything received so far
//! arrives at the destination. Its time average is integrated segment by
//! segment (`a * dt + dt^2 / 2`), so there is no discretization error.
//!
//! Confidence half-widths use batch means: 32 equal-length time batches for
//! age, 32 contiguous packet batches (by generation order) for delay.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::des::{SimulationTrace, TraceConfig};
use crate::disciplines::Packet;
use crate::error::{Error, Result};

pub const N_BATCHES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgeBreakpoint {
    pub time: f64,
    /// Age immediately after the event.
    pub age: f64,
    /// Generation time of the freshest packet received so far.
    pub freshest_gen: f64,
}

impl AgeBreakpoint {
    /// `A(0) = 0`: the destination starts with a virtual update generated at time 0.
    pub fn origin() -> Self {
        AgeBreakpoint {
            time: 0.0,
            age: 0.0,
            freshest_gen: 0.0,
        }
    }
}

/// Destination-side age bookkeeping.
#[derive(Debug, Clone, Copy, Default)]
pub struct AgeState {
    freshest_gen: f64,
}

impl AgeState {
    pub fn new() -> Self {
        AgeState::default()
    }

    pub fn freshest_gen(&self) -> f64 {
        self.freshest_gen
    }

    /// Marks `pkt` informative iff it is fresher than every earlier
    /// reception; returns the new breakpoint when the age drops.
    pub fn on_reception(&mut self, pkt: &mut Packet, now: f64) -> Option<AgeBreakpoint> {
        if pkt.gen_time > self.freshest_gen {
            self.freshest_gen = pkt.gen_time;
            pkt.informative = true;
            Some(AgeBreakpoint {
                time: now,
                age: now - pkt.gen_time,
                freshest_gen: pkt.gen_time,
            })
        } else {
            pkt.informative = false;
            None
        }
    }
}

/// A closed time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Self {
        Window { start, end }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }

    pub fn split(&self, parts: usize) -> Vec<Window> {
        let step = self.len() / parts as f64;
        (0..parts)
            .map(|i| {
                let a = self.start + step * i as f64;
                let b = if i + 1 == parts {
                    self.end
                } else {
                    self.start + step * (i + 1) as f64
                };
                Window::new(a, b)
            })
            .collect()
    }
}

/// Post-warmup window: from the generation of the first counted packet to
/// the generation of the last packet.
pub fn counted_window(trace: &SimulationTrace) -> Result<Window> {
    let n = trace.n_generated;
    let first = (trace.config.warmup_fraction * n as f64).floor() as usize;
    if n < 2 || first + 1 >= n {
        return Err(Error::DegenerateSample(format!(
            "{n} packets with warmup {} leave fewer than 2 counted",
            trace.config.warmup_fraction
        )));
    }
    let mut start = None;
    let mut end = None;
    for p in &trace.delivered {
        if p.id as usize == first {
            start = Some(p.gen_time);
        }
        if p.id as usize == n - 1 {
            end = Some(p.gen_time);
        }
    }
    match (start, end) {
        (Some(s), Some(e)) => Ok(Window::new(s, e)),
        _ => Err(Error::DegenerateSample("trace is missing packets".into())),
    }
}

fn age_area(trace: &SimulationTrace, w: Window) -> f64 {
    let bps = &trace.age_breakpoints;
    let mut i = bps.partition_point(|b| b.time <= w.start);
    let mut t = w.start;
    let mut freshest = bps[i.saturating_sub(1)].freshest_gen;
    let mut area = 0.0;
    while i < bps.len() && bps[i].time < w.end {
        let dt = bps[i].time - t;
        area += (t - freshest) * dt + 0.5 * dt * dt;
        t = bps[i].time;
        freshest = bps[i].freshest_gen;
        i += 1;
    }
    let dt = w.end - t;
    area + (t - freshest) * dt + 0.5 * dt * dt
}

/// Exact time-average age over `window`.
pub fn compute_average_age(trace: &SimulationTrace, window: Window) -> Result<f64> {
    if !(window.start < window.end) || window.start < 0.0 || window.end > trace.horizon {
        return Err(Error::EmptyWindow {
            start: window.start,
            end: window.end,
        });
    }
    Ok(age_area(trace, window) / window.len())
}

/// Welford summary of one batch of delays.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BatchStats {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl BatchStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &BatchStats) -> BatchStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        BatchStats {
            count: self.count + other.count,
            mean: self.mean + d * other.count as f64 / n,
            m2: self.m2 + other.m2 + d * d * self.count as f64 * other.count as f64 / n,
        }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }
}

fn counted_delays(trace: &SimulationTrace, window: Window) -> Vec<f64> {
    let mut pkts: Vec<&Packet> = trace
        .delivered
        .iter()
        .filter(|p| window.contains(p.gen_time))
        .collect();
    pkts.sort_unstable_by_key(|p| p.id);
    pkts.iter().filter_map(|p| p.delay()).collect()
}

/// Sample mean and unbiased sample variance of `recv - gen` over packets
/// generated inside `window`, informative or not.
pub fn compute_delay_stats(trace: &SimulationTrace, window: Window) -> Result<(f64, f64)> {
    delay_stats(&counted_delays(trace, window))
}

pub fn delay_stats(delays: &[f64]) -> Result<(f64, f64)> {
    if delays.len() < 2 {
        return Err(Error::DegenerateSample(format!(
            "need at least 2 delays, got {}",
            delays.len()
        )));
    }
    let mut s = BatchStats::default();
    delays.iter().for_each(|&d| s.push(d));
    Ok((s.mean, s.sample_variance()))
}

/// Fraction of delivered packets that lowered the age.
pub fn informative_receptions(trace: &SimulationTrace) -> f64 {
    if trace.delivered.is_empty() {
        return 0.0;
    }
    trace.delivered.iter().filter(|p| p.informative).count() as f64 / trace.delivered.len() as f64
}

fn split_batches(values: &[f64], k: usize) -> Vec<BatchStats> {
    let n = values.len();
    let k = k.min(n).max(1);
    (0..k)
        .map(|b| {
            let lo = b * n / k;
            let hi = (b + 1) * n / k;
            let mut s = BatchStats::default();
            values[lo..hi].iter().for_each(|&d| s.push(d));
            s
        })
        .collect()
}

/// Two-sided 95% Student-t half-width for the mean of `values`.
pub fn t_halfwidth(values: &[f64]) -> f64 {
    let k = values.len();
    if k < 2 {
        return f64::INFINITY;
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (k - 1) as f64)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(1.96);
    t * (var / k as f64).sqrt()
}

/// Metrics of one trace.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub avg_age: f64,
    pub mean_delay: f64,
    pub delay_variance: f64,
    pub informative_fraction: f64,
    pub n_counted: usize,
    pub ci_halfwidth_age: f64,
    pub ci_halfwidth_delay: f64,
    pub seed: u64,
    pub window: Window,
    pub config: TraceConfig,
    #[serde(skip)]
    pub age_batches: Vec<f64>,
    #[serde(skip)]
    pub delay_batches: Vec<BatchStats>,
}

impl MetricsReport {
    pub fn from_trace(trace: &SimulationTrace) -> Result<Self> {
        let window = counted_window(trace)?;
        let age_batches: Vec<f64> = window
            .split(N_BATCHES)
            .into_iter()
            .map(|w| compute_average_age(trace, w))
            .collect::<Result<_>>()?;
        let avg_age = compute_average_age(trace, window)?;

        let mut pkts: Vec<&Packet> = trace
            .delivered
            .iter()
            .filter(|p| window.contains(p.gen_time))
            .collect();
        pkts.sort_unstable_by_key(|p| p.id);
        let delays: Vec<f64> = pkts.iter().filter_map(|p| p.delay()).collect();
        let (mean_delay, delay_variance) = delay_stats(&delays)?;
        let delay_batches = split_batches(&delays, N_BATCHES);
        let batch_means: Vec<f64> = delay_batches.iter().map(|b| b.mean).collect();
        let informative = pkts.iter().filter(|p| p.informative).count();

        Ok(MetricsReport {
            avg_age,
            mean_delay,
            delay_variance,
            informative_fraction: informative as f64 / pkts.len() as f64,
            n_counted: pkts.len(),
            ci_halfwidth_age: t_halfwidth(&age_batches),
            ci_halfwidth_delay: t_halfwidth(&batch_means),
            seed: trace.seed,
            window,
            config: trace.config.clone(),
            age_batches,
            delay_batches,
        })
    }
}

/// Metrics pooled over replications of one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicatedMetrics {
    pub avg_age: f64,
    pub avg_age_ci: f64,
    pub mean_delay: f64,
    pub mean_delay_ci: f64,
    pub delay_variance: f64,
    pub delay_variance_ci: f64,
    pub informative_fraction: f64,
    pub n_counted: usize,
    pub seeds: Vec<u64>,
}

impl ReplicatedMetrics {
    /// Point estimates pool every counted packet (delay) or average the
    /// per-replication time averages (age); half-widths come from the
    /// pooled batch means of all replications.
    pub fn pool(reports: &[MetricsReport]) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::DegenerateSample("no replications to pool".into()));
        }
        let avg_age = reports.iter().map(|r| r.avg_age).sum::<f64>() / reports.len() as f64;
        let age_batches: Vec<f64> = reports.iter().flat_map(|r| r.age_batches.iter().copied()).collect();

        let batches: Vec<BatchStats> = reports.iter().flat_map(|r| r.delay_batches.iter().copied()).collect();
        let total = batches.iter().fold(BatchStats::default(), |acc, b| acc.merge(b));
        let batch_means: Vec<f64> = batches.iter().map(|b| b.mean).collect();
        // per-batch second moments about the pooled mean; their average is the pooled variance
        let batch_vars: Vec<f64> = batches
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| (b.m2 + b.count as f64 * (b.mean - total.mean).powi(2)) / b.count as f64)
            .collect();
        let informative: f64 = reports
            .iter()
            .map(|r| r.informative_fraction * r.n_counted as f64)
            .sum();

        Ok(ReplicatedMetrics {
            avg_age,
            avg_age_ci: t_halfwidth(&age_batches),
            mean_delay: total.mean,
            mean_delay_ci: t_halfwidth(&batch_means),
            delay_variance: total.sample_variance(),
            delay_variance_ci: t_halfwidth(&batch_vars),
            informative_fraction: informative / total.count as f64,
            n_counted: total.count,
            seeds: reports.iter().map(|r| r.seed).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::run_simulation;
    use crate::disciplines::Discipline;
    use crate::distributions::{ArrivalProcess, ServiceDistribution};
    use approx::assert_relative_eq;

    fn pkt(id: u64, gen: f64) -> Packet {
        Packet::new(id, gen, 0.1)
    }

    #[test]
    fn in_order_receptions_all_drop_age() {
        let mut st = AgeState::new();
        for (i, (g, r)) in [(1.0, 1.5), (2.0, 2.6), (3.0, 3.1)].into_iter().enumerate() {
            let mut p = pkt(i as u64, g);
            let bp = st.on_reception(&mut p, r).unwrap();
            assert!(p.informative);
            assert_relative_eq!(bp.age, r - g);
        }
    }

    #[test]
    fn out_of_order_reception_is_not_informative() {
        // packets 1..4 generated at 1,2,3,4; packet 3 overtakes packet 2
        let mut st = AgeState::new();
        let schedule = [(1u64, 1.0, 1.5), (3, 3.0, 3.4), (2, 2.0, 3.8), (4, 4.0, 4.2)];
        let mut flags = Vec::new();
        for (id, g, r) in schedule {
            let mut p = pkt(id, g);
            st.on_reception(&mut p, r);
            flags.push((id, p.informative));
        }
        assert_eq!(flags, vec![(1, true), (3, true), (2, false), (4, true)]);
        let informative = flags.iter().filter(|f| f.1).count() as f64 / flags.len() as f64;
        assert_eq!(informative, 0.75);
    }

    #[test]
    fn first_reception_drops_from_elapsed_time() {
        let mut st = AgeState::new();
        let mut p = pkt(0, 2.0);
        // age before reception at t=3.5 is 3.5 (A(0)=0), after it is 1.5
        let bp = st.on_reception(&mut p, 3.5).unwrap();
        assert_eq!(bp.age, 1.5);
        assert!(p.informative);
    }

    #[test]
    fn dd1_average_age_and_delay() {
        let a = ArrivalProcess::periodic(0.5).unwrap();
        let s = ServiceDistribution::deterministic(0.8).unwrap();
        let tr = run_simulation(&a, &s, Discipline::Fcfs, 1000, 0.1, 0).unwrap();
        let w = counted_window(&tr).unwrap();
        assert_relative_eq!(compute_average_age(&tr, w).unwrap(), 2.25, max_relative = 1e-9);
        let (m, v) = compute_delay_stats(&tr, w).unwrap();
        assert_relative_eq!(m, 1.25, max_relative = 1e-12);
        assert!(v.abs() < 1e-20);
        assert_eq!(informative_receptions(&tr), 1.0);
    }

    fn zero_delay_trace(gens: &[f64]) -> SimulationTrace {
        let a = ArrivalProcess::periodic(0.5).unwrap();
        let s = ServiceDistribution::deterministic(0.8).unwrap();
        let mut tr = run_simulation(&a, &s, Discipline::Fcfs, gens.len(), 0.0, 0).unwrap();
        let mut st = AgeState::new();
        tr.age_breakpoints = vec![AgeBreakpoint::origin()];
        tr.delivered = gens
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let mut p = Packet::new(i as u64, g, 0.0);
                p.recv_time = Some(g);
                if let Some(bp) = st.on_reception(&mut p, g) {
                    tr.age_breakpoints.push(bp);
                }
                p
            })
            .collect();
        tr.horizon = *gens.last().unwrap();
        tr
    }

    #[test]
    fn zero_delay_periodic_gives_half_period() {
        let gens: Vec<f64> = (1..=100).map(|i| 2.0 * i as f64).collect();
        let tr = zero_delay_trace(&gens);
        let age = compute_average_age(&tr, Window::new(2.0, 200.0)).unwrap();
        assert_relative_eq!(age, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn single_segment_is_trapezoid() {
        let tr = zero_delay_trace(&[1.0, 10.0]);
        // on [2, 6] the age runs from 1 to 5 with no drop
        let age = compute_average_age(&tr, Window::new(2.0, 6.0)).unwrap();
        assert_relative_eq!(age, 1.0 + 4.0 / 2.0);
        assert!(compute_average_age(&tr, Window::new(3.0, 3.0)).is_err());
        assert!(compute_average_age(&tr, Window::new(3.0, 11.0)).is_err());
    }

    #[test]
    fn delay_stats_two_point() {
        let (m, v) = delay_stats(&[1.0, 3.0]).unwrap();
        assert_eq!((m, v), (2.0, 2.0));
        assert!(matches!(delay_stats(&[1.0]), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn age_at_receptions_matches_brute_force() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::pareto(0.8, 1.5).unwrap();
        for d in Discipline::ALL {
            let tr = run_simulation(&a, &s, d, 1000, 0.0, 21).unwrap();
            for p in &tr.delivered {
                let t = p.recv_time.unwrap();
                let brute = tr
                    .delivered
                    .iter()
                    .filter(|q| q.recv_time.unwrap() <= t)
                    .map(|q| t - q.gen_time)
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(tr.age_at(t), brute, "{d} at {t}");
            }
        }
    }

    #[test]
    fn average_age_is_additive_over_partitions() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::lognormal(0.8, 1.0).unwrap();
        let tr = run_simulation(&a, &s, Discipline::LcfsPreemptiveResume, 5000, 0.1, 3).unwrap();
        let w = counted_window(&tr).unwrap();
        let whole = compute_average_age(&tr, w).unwrap();
        for parts in [2, 7, 32] {
            let pieces = w.split(parts);
            let weighted: f64 = pieces
                .iter()
                .map(|p| compute_average_age(&tr, *p).unwrap() * p.len())
                .sum::<f64>()
                / w.len();
            assert_relative_eq!(weighted, whole, max_relative = 1e-10);
        }
    }

    #[test]
    fn report_invariants() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::weibull(0.8, 0.5).unwrap();
        for d in Discipline::ALL {
            let tr = run_simulation(&a, &s, d, 20_000, 0.1, 8).unwrap();
            let r = MetricsReport::from_trace(&tr).unwrap();
            assert!(r.avg_age >= 0.0);
            assert!(r.delay_variance >= 0.0);
            assert!(r.informative_fraction > 0.0 && r.informative_fraction <= 1.0);
            let min_req = tr.delivered.iter().map(|p| p.service_req).fold(f64::INFINITY, f64::min);
            assert!(r.mean_delay >= min_req);
            assert_eq!(r.n_counted, 18_000);
            assert_eq!(r.age_batches.len(), N_BATCHES);
            if d == Discipline::Fcfs {
                assert_eq!(r.informative_fraction, 1.0);
            }
        }
    }

    #[test]
    fn pooled_metrics_match_single_report() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::exponential(0.8).unwrap();
        let tr = run_simulation(&a, &s, Discipline::Fcfs, 10_000, 0.1, 1).unwrap();
        let r = MetricsReport::from_trace(&tr).unwrap();
        let pooled = ReplicatedMetrics::pool(std::slice::from_ref(&r)).unwrap();
        assert_relative_eq!(pooled.mean_delay, r.mean_delay, max_relative = 1e-12);
        assert_relative_eq!(pooled.delay_variance, r.delay_variance, max_relative = 1e-10);
        assert_relative_eq!(pooled.avg_age, r.avg_age);
        assert_relative_eq!(pooled.avg_age_ci, r.ci_halfwidth_age);
    }

    #[test]
    fn batch_merge_equals_direct() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.3).collect();
        let direct = split_batches(&xs, 1)[0];
        let merged = split_batches(&xs, 32)
            .iter()
            .fold(BatchStats::default(), |acc, b| acc.merge(b));
        assert_eq!(merged.count, direct.count);
        assert_relative_eq!(merged.mean, direct.mean, max_relative = 1e-12);
        assert_relative_eq!(merged.m2, direct.m2, max_relative = 1e-10);
    }
}
