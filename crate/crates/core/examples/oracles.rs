//! Analytic baselines next to simulation.

use aoi_tradeoff::des::{replicate, ExperimentPoint};
use aoi_tradeoff::metrics::{MetricsReport, ReplicatedMetrics};
use aoi_tradeoff::prelude::*;

fn simulate(arrival: ArrivalProcess, service: ServiceDistribution, d: Discipline) -> aoi_tradeoff::Result<ReplicatedMetrics> {
    let point = ExperimentPoint::new(arrival, service, d, 200_000, 0.1);
    let reports = replicate(&point, 4, 1)?
        .iter()
        .map(MetricsReport::from_trace)
        .collect::<aoi_tradeoff::Result<Vec<_>>>()?;
    ReplicatedMetrics::pool(&reports)
}

fn main() -> aoi_tradeoff::Result<()> {
    let (lambda, mu) = (0.5, 0.8);
    let poisson = ArrivalProcess::poisson(lambda)?;
    let periodic = ArrivalProcess::periodic(lambda)?;
    println!("minimum age: Poisson {}, periodic {}", a_min(&poisson), a_min(&periodic));

    for svc in [ServiceDistribution::exponential(mu)?, ServiceDistribution::lognormal(mu, 1.0)?] {
        let pk = pk_delay(lambda, &svc)?;
        let m = simulate(poisson, svc, Discipline::Fcfs)?;
        println!("FCFS {}: P-K delay {:.4}, simulated {:.4} +/- {:.4}", svc.spec(), pk, m.mean_delay, m.mean_delay_ci);
    }

    let m = simulate(periodic, ServiceDistribution::deterministic(mu)?, Discipline::Fcfs)?;
    println!("D/D/1 age {:.4}, simulated {:.4}", dd1_age(lambda, mu)?, m.avg_age);

    let svc = ServiceDistribution::weibull(mu, 0.5)?;
    let g = gginf_age_estimate(&poisson, &svc, 200_000, 3)?;
    let m = simulate(poisson, svc, Discipline::InfiniteServer)?;
    println!(
        "G/G/inf {}: Monte-Carlo {:.4} +/- {:.4}, simulated {:.4} +/- {:.4}",
        svc.spec(),
        g.estimate,
        1.96 * g.stderr,
        m.avg_age,
        m.avg_age_ci
    );
    Ok(())
}
