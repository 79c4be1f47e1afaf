//! The age/delay scatter at lambda = 0.5, mu = 0.8, written as CSV, JSON and
//! a gnuplot script.
//!
//! cargo run --release --example figure1 -- [out_dir] [n_arrivals] [reps]
//! then `gnuplot -p <out_dir>/figure1.gp`

use std::path::PathBuf;

use aoi_tradeoff::experiments::{emit_outputs, run_suite, OutputPaths, SuiteResults, SweepConfig};

fn main() -> aoi_tradeoff::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let dir = PathBuf::from(args.first().map(String::as_str).unwrap_or("figure1-out"));
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let reps = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4);

    let cfg = SweepConfig::figure1().with_scale(n, reps);
    let results = SuiteResults::new(&cfg, run_suite(&cfg)?)?;
    let paths = OutputPaths::in_dir(&dir, "figure1");
    emit_outputs(&results, &paths)?;

    for p in &results.points {
        println!("{:<28} age {:>7.4}  delay {:>7.4}", p.label, p.avg_age, p.mean_delay);
    }
    println!("\ndelay frontier: {:?}", results.frontier_delay);
    println!("outputs in {}", dir.display());
    Ok(())
}
