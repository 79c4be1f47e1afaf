//! Run a sweep from a TOML file, defaulting to the shipped tradeoff preset.
//!
//! cargo run --release --example config_sweep -- presets/no-tradeoff.toml

use std::path::PathBuf;

use aoi_tradeoff::experiments::{csv_string, run_suite, SweepConfig};

fn main() -> aoi_tradeoff::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("presets/tradeoff-sweep.toml"));
    // shrink so the example finishes quickly; drop this line for full scale
    let cfg = SweepConfig::from_path(&path)?.with_scale(50_000, 2);
    eprintln!("{}: {} grid points", path.display(), cfg.points()?.len());
    print!("{}", csv_string(&run_suite(&cfg)?)?);
    Ok(())
}
