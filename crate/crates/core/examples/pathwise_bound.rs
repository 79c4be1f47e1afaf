//! Coupled runs: the infinite-server station sees the same generation times
//! and service requirements as the single server, and its age is never higher.

use aoi_tradeoff::prelude::*;

fn main() -> aoi_tradeoff::Result<()> {
    let arrival = ArrivalProcess::poisson(0.5)?;
    let service = ServiceDistribution::lognormal(0.8, 1.5)?;
    let seed = 9;
    let inf = run_simulation(&arrival, &service, Discipline::InfiniteServer, 10_000, 0.0, seed)?;
    for d in [Discipline::Fcfs, Discipline::LcfsNonPreemptive, Discipline::LcfsPreemptiveResume] {
        let single = run_simulation(&arrival, &service, d, 10_000, 0.0, seed)?;
        let times: Vec<f64> = inf.age_breakpoints.iter().chain(&single.age_breakpoints).map(|b| b.time).collect();
        let worst = times
            .iter()
            .map(|&t| inf.age_at(t) - single.age_at(t))
            .fold(f64::NEG_INFINITY, f64::max);
        let gap: f64 = times.iter().map(|&t| single.age_at(t) - inf.age_at(t)).sum::<f64>() / times.len() as f64;
        println!(
            "{d:<8} {} breakpoints, max(A_inf - A) = {worst:.3e}, mean gap {gap:.3}",
            times.len()
        );
    }
    Ok(())
}
