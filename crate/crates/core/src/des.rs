//! Event-driven simulation of one update stream through one station.
//!
//! Each run owns two ChaCha streams keyed by the run seed: stream 0 draws
//! inter-generation times, stream 1 draws service requirements in arrival
//! order. Two runs with the same seed therefore see the same `(X_i, S_i)`
//! sequence whatever the discipline, which is what the coupled comparisons
//! rely on.
//!
//! Events are ordered by `(time, kind, id)` with completions before
//! arrivals at equal times.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::disciplines::{Discipline, Packet, ServerState};
use crate::distributions::{ArrivalProcess, DurationSampler, ServiceDistribution};
use crate::error::{Error, Result};
use crate::metrics::{AgeBreakpoint, AgeState};

const ARRIVAL_STREAM: u64 = 0;
const SERVICE_STREAM: u64 = 1;

/// Everything that defines one simulated configuration except the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentPoint {
    pub arrival: ArrivalProcess,
    pub service: ServiceDistribution,
    pub discipline: Discipline,
    pub n_arrivals: usize,
    pub warmup_fraction: f64,
}

impl ExperimentPoint {
    pub fn new(
        arrival: ArrivalProcess,
        service: ServiceDistribution,
        discipline: Discipline,
        n_arrivals: usize,
        warmup_fraction: f64,
    ) -> Self {
        ExperimentPoint {
            arrival,
            service,
            discipline,
            n_arrivals,
            warmup_fraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_arrivals == 0 {
            return Err(Error::domain("n_arrivals must be at least 1"));
        }
        if !(0.0..=0.5).contains(&self.warmup_fraction) {
            return Err(Error::domain(format!(
                "warmup_fraction must lie in [0, 0.5], got {}",
                self.warmup_fraction
            )));
        }
        if self.discipline.is_single_server() {
            self.arrival.check_stable(self.service.mu())?;
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.discipline, self.arrival.family(), self.service.spec())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceConfig {
    pub arrival: String,
    pub lambda: f64,
    pub service: String,
    pub mu: f64,
    pub discipline: Discipline,
    pub n_arrivals: usize,
    pub warmup_fraction: f64,
}

impl From<&ExperimentPoint> for TraceConfig {
    fn from(p: &ExperimentPoint) -> Self {
        TraceConfig {
            arrival: p.arrival.family().to_string(),
            lambda: p.arrival.lambda(),
            service: p.service.spec().to_string(),
            mu: p.service.mu(),
            discipline: p.discipline,
            n_arrivals: p.n_arrivals,
            warmup_fraction: p.warmup_fraction,
        }
    }
}

/// Complete record of one run.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationTrace {
    /// Packets in reception order.
    pub delivered: Vec<Packet>,
    /// Age right after each drop, starting with `(0, 0)`. Between
    /// breakpoints the age grows with slope one.
    pub age_breakpoints: Vec<AgeBreakpoint>,
    /// Time of the last reception.
    pub horizon: f64,
    pub n_generated: usize,
    pub seed: u64,
    pub config: TraceConfig,
}

impl SimulationTrace {
    /// Delivered packets indexed by id.
    pub fn by_id(&self) -> Vec<Packet> {
        let mut v = self.delivered.clone();
        v.sort_unstable_by_key(|p| p.id);
        v
    }

    fn breakpoint_at(&self, t: f64) -> &AgeBreakpoint {
        let idx = self.age_breakpoints.partition_point(|b| b.time <= t);
        &self.age_breakpoints[idx.saturating_sub(1)]
    }

    /// Generation time of the freshest packet received by time `t`
    /// (0 before the first reception).
    pub fn freshest_at(&self, t: f64) -> f64 {
        self.breakpoint_at(t).freshest_gen
    }

    /// `A(t)`, right-continuous at receptions.
    pub fn age_at(&self, t: f64) -> f64 {
        t - self.freshest_at(t)
    }

    /// Maximal intervals during which the station holds at least one packet.
    pub fn busy_periods(&self) -> Vec<(f64, f64)> {
        // (time, +1 arrival / -1 departure); departures sort first on ties
        let mut events: Vec<(f64, i8)> = Vec::with_capacity(2 * self.delivered.len());
        for p in &self.delivered {
            events.push((p.gen_time, 1));
            if let Some(r) = p.recv_time {
                events.push((r, -1));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut out = Vec::new();
        let mut level = 0i64;
        let mut start = 0.0;
        for (t, d) in events {
            if level == 0 && d > 0 {
                start = t;
            }
            level += i64::from(d);
            if level == 0 {
                out.push((start, t));
            }
        }
        out
    }
}

fn streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut arrivals = ChaCha8Rng::seed_from_u64(seed);
    arrivals.set_stream(ARRIVAL_STREAM);
    let mut services = ChaCha8Rng::seed_from_u64(seed);
    services.set_stream(SERVICE_STREAM);
    (arrivals, services)
}

/// Simulates `n_arrivals` generations, then drains the station.
pub fn run_simulation(
    arrival: &ArrivalProcess,
    service: &ServiceDistribution,
    discipline: Discipline,
    n_arrivals: usize,
    warmup_fraction: f64,
    seed: u64,
) -> Result<SimulationTrace> {
    let point = ExperimentPoint::new(*arrival, *service, discipline, n_arrivals, warmup_fraction);
    simulate_point(&point, seed)
}

pub fn simulate_point(point: &ExperimentPoint, seed: u64) -> Result<SimulationTrace> {
    point.validate()?;
    let (mut arrival_rng, mut service_rng) = streams(seed);
    let n = point.n_arrivals;

    let mut station = ServerState::new(point.discipline);
    let mut age = AgeState::new();
    let mut delivered = Vec::with_capacity(n);
    let mut breakpoints = vec![AgeBreakpoint::origin()];

    let mut generated = 0usize;
    let mut next_arrival = Some(point.arrival.sample(&mut arrival_rng));
    let mut now = 0.0;

    loop {
        let next_done = station.next_completion_time();
        let completion_first = match (next_arrival, next_done) {
            (None, None) => break,
            (Some(a), Some(d)) => d <= a,
            (None, Some(_)) => true,
            (Some(_), None) => false,
        };
        if completion_first {
            now = next_done.unwrap_or(now);
            let mut done = station.handle_completion(now).done;
            if let Some(bp) = age.on_reception(&mut done, now) {
                push_breakpoint(&mut breakpoints, bp);
            }
            delivered.push(done);
        } else {
            let t = next_arrival.unwrap_or(now);
            now = t;
            let s = point.service.sample(&mut service_rng);
            station.handle_arrival(Packet::new(generated as u64, t, s), t);
            generated += 1;
            next_arrival = (generated < n).then(|| t + point.arrival.sample(&mut arrival_rng));
        }
    }

    Ok(SimulationTrace {
        delivered,
        age_breakpoints: breakpoints,
        horizon: now,
        n_generated: generated,
        seed,
        config: TraceConfig::from(point),
    })
}

fn push_breakpoint(bps: &mut Vec<AgeBreakpoint>, bp: AgeBreakpoint) {
    match bps.last_mut() {
        Some(last) if last.time == bp.time => *last = bp,
        _ => bps.push(bp),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Seed for replication `rep`.
pub fn rep_seed(base_seed: u64, rep: usize) -> u64 {
    base_seed.wrapping_add(rep as u64)
}

/// `n_reps` independent runs, seeds `base_seed + rep`, ordered by rep index.
pub fn replicate(point: &ExperimentPoint, n_reps: usize, base_seed: u64) -> Result<Vec<SimulationTrace>> {
    replicate_with(point, n_reps, base_seed, Execution::Parallel)
}

pub fn replicate_with(
    point: &ExperimentPoint,
    n_reps: usize,
    base_seed: u64,
    exec: Execution,
) -> Result<Vec<SimulationTrace>> {
    map_replications(point, n_reps, base_seed, exec, Ok)
}

/// Runs replications and maps each trace through `f` as soon as it is
/// produced, so large traces need not be held simultaneously.
pub fn map_replications<T, F>(
    point: &ExperimentPoint,
    n_reps: usize,
    base_seed: u64,
    exec: Execution,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SimulationTrace) -> Result<T> + Sync,
{
    if n_reps == 0 {
        return Err(Error::domain("n_reps must be at least 1"));
    }
    point.validate()?;
    let one = |rep: usize| simulate_point(point, rep_seed(base_seed, rep)).and_then(&f);
    match exec {
        Execution::Serial => (0..n_reps).map(one).collect(),
        Execution::Parallel => (0..n_reps).into_par_iter().map(one).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd1() -> (ArrivalProcess, ServiceDistribution) {
        (
            ArrivalProcess::periodic(0.5).unwrap(),
            ServiceDistribution::deterministic(0.8).unwrap(),
        )
    }

    #[test]
    fn dd1_three_arrivals() {
        let (a, s) = dd1();
        let tr = run_simulation(&a, &s, Discipline::Fcfs, 3, 0.0, 1).unwrap();
        let recv: Vec<f64> = tr.delivered.iter().map(|p| p.recv_time.unwrap()).collect();
        let gen: Vec<f64> = tr.delivered.iter().map(|p| p.gen_time).collect();
        assert_eq!(gen, vec![2.0, 4.0, 6.0]);
        assert_eq!(recv, vec![3.25, 5.25, 7.25]);
        assert_eq!(tr.horizon, 7.25);
        assert_eq!(tr.n_generated, 3);
    }

    #[test]
    fn single_arrival_delay_is_service() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::pareto(0.8, 1.5).unwrap();
        for d in Discipline::ALL {
            let tr = run_simulation(&a, &s, d, 1, 0.0, 11).unwrap();
            assert_eq!(tr.delivered.len(), 1);
            let p = tr.delivered[0];
            assert_eq!(p.delay().unwrap(), p.gen_time + p.service_req - p.gen_time);
            assert!(p.informative);
        }
    }

    #[test]
    fn same_seed_same_trace() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::lognormal(0.8, 1.5).unwrap();
        for d in Discipline::ALL {
            let t1 = run_simulation(&a, &s, d, 5000, 0.1, 99).unwrap();
            let t2 = run_simulation(&a, &s, d, 5000, 0.1, 99).unwrap();
            assert_eq!(t1.delivered, t2.delivered);
            assert_eq!(t1.age_breakpoints, t2.age_breakpoints);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = ArrivalProcess::poisson(0.9).unwrap();
        let s = ServiceDistribution::exponential(0.8).unwrap();
        assert!(matches!(
            run_simulation(&a, &s, Discipline::Fcfs, 10, 0.1, 0),
            Err(Error::Stability { .. })
        ));
        // infinite server has no stability condition
        assert!(run_simulation(&a, &s, Discipline::InfiniteServer, 10, 0.1, 0).is_ok());
        let a = ArrivalProcess::poisson(0.5).unwrap();
        assert!(run_simulation(&a, &s, Discipline::Fcfs, 0, 0.1, 0).is_err());
        assert!(run_simulation(&a, &s, Discipline::Fcfs, 10, 0.6, 0).is_err());
    }

    #[test]
    fn breakpoints_strictly_increasing() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::pareto(0.8, 1.5).unwrap();
        for d in Discipline::ALL {
            let tr = run_simulation(&a, &s, d, 10_000, 0.0, 4).unwrap();
            for w in tr.age_breakpoints.windows(2) {
                assert!(w[1].time > w[0].time);
            }
        }
    }

    #[test]
    fn replicate_single_matches_run() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::exponential(0.8).unwrap();
        let p = ExperimentPoint::new(a, s, Discipline::Fcfs, 2000, 0.1);
        let reps = replicate(&p, 1, 17).unwrap();
        let direct = simulate_point(&p, 17).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].delivered, direct.delivered);
        assert!(replicate(&p, 0, 17).is_err());
    }

    #[test]
    fn serial_and_parallel_replication_agree() {
        let a = ArrivalProcess::poisson(0.5).unwrap();
        let s = ServiceDistribution::weibull(0.8, 0.5).unwrap();
        let p = ExperimentPoint::new(a, s, Discipline::LcfsPreemptiveResume, 3000, 0.1);
        let serial = replicate_with(&p, 8, 5, Execution::Serial).unwrap();
        let par = replicate_with(&p, 8, 5, Execution::Parallel).unwrap();
        let again = replicate(&p, 8, 5).unwrap();
        for ((x, y), z) in serial.iter().zip(&par).zip(&again) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.delivered, y.delivered);
            assert_eq!(y.age_breakpoints, z.age_breakpoints);
        }
        assert_ne!(serial[0].delivered, serial[1].delivered);
    }
}
