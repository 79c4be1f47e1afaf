//! One configuration, one replication: trace, age sawtooth, metrics.
//!
//! cargo run --release --example simulate_one -- [discipline] [service] [n]
//! e.g. `-- lcfs-p "pareto alpha=1.5" 200000`

use aoi_tradeoff::metrics::{counted_window, informative_receptions};
use aoi_tradeoff::prelude::*;

fn main() -> aoi_tradeoff::Result<()> {
    let mut args = std::env::args().skip(1);
    let discipline: Discipline = args.next().as_deref().unwrap_or("lcfs-p").parse()?;
    let spec: ServiceSpec = args.next().as_deref().unwrap_or("pareto alpha=2").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);

    let arrival = ArrivalProcess::poisson(0.5)?;
    let service = spec.with_rate(0.8)?;
    let trace = run_simulation(&arrival, &service, discipline, n, 0.1, 42)?;

    println!("{discipline} / {spec}: {} packets delivered by t = {:.1}", trace.delivered.len(), trace.horizon);
    println!("first receptions (id, generated, received, informative):");
    for p in trace.delivered.iter().take(8) {
        println!("  {:>3}  {:>8.3}  {:>8.3}  {}", p.id, p.gen_time, p.recv_time.unwrap(), p.informative);
    }
    let w = counted_window(&trace)?;
    let mid = 0.5 * (w.start + w.end);
    println!("age at t = {mid:.2}: {:.3}", trace.age_at(mid));
    println!("informative fraction: {:.4}", informative_receptions(&trace));

    let m = MetricsReport::from_trace(&trace)?;
    println!("average age  {:.4} +/- {:.4}  (floor {:.1})", m.avg_age, m.ci_halfwidth_age, a_min(&arrival));
    println!("mean delay   {:.4} +/- {:.4}", m.mean_delay, m.ci_halfwidth_delay);
    println!("delay var    {:.4}", m.delay_variance);
    Ok(())
}
