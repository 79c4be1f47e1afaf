//! Heavier Pareto tails push LCFS-P age toward its floor while the second
//! moment of service, and with it the delay variance, blows up.
//!
//! cargo run --release --example strong_tradeoff -- [n_arrivals] [reps]

use aoi_tradeoff::experiments::{run_suite, GridEntry, SweepConfig};
use aoi_tradeoff::oracles::{lemma2_table, lemma3_table};
use aoi_tradeoff::prelude::*;

fn main() -> aoi_tradeoff::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|s| s.parse::<usize>().ok());
    let n = args.next().unwrap_or(200_000);
    let reps = args.next().unwrap_or(4);
    let alphas = [3.0, 2.5, 2.0, 1.7, 1.5];

    let mut cfg = SweepConfig::tradeoff_sweep().with_scale(n, reps);
    cfg.grid = vec![GridEntry::new(
        &[Discipline::LcfsPreemptiveResume, Discipline::Fcfs],
        ServiceFamily::Pareto,
        &alphas,
    )];
    let pts = run_suite(&cfg)?;
    println!("{:<28} {:>14} {:>18} {:>14}", "point", "age", "delay", "delay var");
    for p in &pts {
        println!(
            "{:<28} {:>7.4} +/- {:.4} {:>9.4} +/- {:.4} {:>14.2}{}",
            p.label,
            p.avg_age,
            p.avg_age_ci,
            p.mean_delay,
            p.mean_delay_ci,
            p.delay_var,
            if p.slow_convergence { "  (slow convergence)" } else { "" }
        );
    }

    println!("\nE[S^2] along the sweep:");
    lemma3_table(ServiceFamily::Pareto, 0.8, &alphas, None)?.write_csv(std::io::stdout())?;
    println!("\ntail and truncated mean toward alpha = 1:");
    lemma2_table(ServiceFamily::Pareto, 0.8, 0.5, &[2.0, 1.5, 1.2, 1.05, 1.01], &[2.0, 4.0])?.write_csv(std::io::stdout())?;
    Ok(())
}
