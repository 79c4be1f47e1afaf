//! Minimizing `delay + nu * age` over a grid walks along the Pareto frontier.

use aoi_tradeoff::experiments::{pareto_frontier, run_suite, scalarized_pick, SweepConfig};
use aoi_tradeoff::prelude::*;

fn main() -> aoi_tradeoff::Result<()> {
    let cfg = SweepConfig::figure1().with_scale(100_000, 2);
    let pts = run_suite(&cfg)?;
    for objective in [Objective::Delay, Objective::DelayVariance] {
        println!("{objective:?} frontier:");
        for p in pareto_frontier(&pts, objective) {
            println!("  {:<28} age {:>7.4}  value {:>10.4}", p.label, p.avg_age, p.objective(objective));
        }
        for nu in [0.0, 0.1, 0.5, 1.0, 5.0, 100.0] {
            let p = scalarized_pick(&pts, nu, objective)?;
            println!("  nu = {nu:<5} -> {}", p.label);
        }
    }
    Ok(())
}
