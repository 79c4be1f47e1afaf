//! Two settings where age and delay are minimized together.
//!
//! cargo run --release --example no_tradeoff -- [n_arrivals] [reps]

use aoi_tradeoff::experiments::{pareto_frontier, run_suite, SweepConfig};
use aoi_tradeoff::prelude::*;

fn main() -> aoi_tradeoff::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|s| s.parse::<usize>().ok());
    let cfg = SweepConfig::no_tradeoff().with_scale(args.next().unwrap_or(200_000), args.next().unwrap_or(4));
    let pts = run_suite(&cfg)?;
    for p in &pts {
        println!("{:<28} age {:>8.4} +/- {:.4}   delay {:>9.4} +/- {:.4}", p.label, p.avg_age, p.avg_age_ci, p.mean_delay, p.mean_delay_ci);
    }
    let poisson: Vec<FrontierPoint> = pts.iter().filter(|p| p.arrival == ArrivalFamily::Exponential).cloned().collect();
    let periodic: Vec<FrontierPoint> = pts.iter().filter(|p| p.arrival == ArrivalFamily::Deterministic).cloned().collect();
    let names = |v: Vec<FrontierPoint>| v.into_iter().map(|p| p.label).collect::<Vec<_>>();
    println!("\nexponential service, frontier: {:?}", names(pareto_frontier(&poisson, Objective::Delay)));
    println!("periodic FCFS, frontier: {:?}", names(pareto_frontier(&periodic, Objective::Delay)));
    Ok(())
}
