use std::fs;
use std::path::PathBuf;

use aoi_tradeoff::des::Execution;
use aoi_tradeoff::experiments::{
    csv_string, emit_outputs, run_suite, run_suite_with, OutputPaths, SuiteResults, SweepConfig, CSV_COLUMNS,
};
use aoi_tradeoff::Error;

fn preset_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("presets").join(format!("{name}.toml"))
}

fn small(mut cfg: SweepConfig) -> SweepConfig {
    cfg.n_arrivals = 4000;
    cfg.n_reps = 2;
    cfg.gginf_samples = 2000;
    cfg
}

#[test]
fn shipped_preset_files_match_the_builtin_presets() {
    for name in ["figure1", "tradeoff-sweep", "no-tradeoff"] {
        let file = SweepConfig::from_path(&preset_path(name)).unwrap();
        assert_eq!(file, SweepConfig::preset(name).unwrap(), "{name}");
    }
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = SweepConfig::no_tradeoff();
    let back = SweepConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn figure1_preset_covers_the_published_grid() {
    let cfg = SweepConfig::figure1();
    assert_eq!((cfg.lambda, cfg.mu), (0.5, 0.8));
    let labels: Vec<String> = cfg.points().unwrap().iter().map(|p| p.label()).collect();
    assert!(labels.len() >= 14);
    for want in ["fcfs det", "lcfs-p exp", "lcfs-p pareto alpha=1.5", "fcfs lognormal sigma=2", "lcfs-p weibull k=0.5"] {
        assert!(labels.iter().any(|l| l == want), "missing {want} in {labels:?}");
    }
}

#[test]
fn unstable_grid_point_is_named_in_the_error() {
    let mut cfg = small(SweepConfig::figure1());
    cfg.lambda = 0.9;
    let err = run_suite(&cfg).unwrap_err();
    match &err {
        Error::GridPoint { label, source } => {
            assert_eq!(label, "fcfs det");
            assert!(matches!(**source, Error::Stability { .. }), "{source}");
        }
        other => panic!("unexpected error {other}"),
    }
    assert!(err.to_string().contains("fcfs det"));
}

#[test]
fn bad_configs_are_rejected() {
    let base = SweepConfig::figure1().to_toml_string();
    for (from, to) in [
        ("lambda = 0.5", "lambda = -1.0"),
        ("n_reps = 8", "n_reps = 0"),
        ("family = \"pareto\"", "family = \"cauchy\""),
        ("shapes = [3.0, 2.0, 1.5]", "shapes = [3.0, 1.0]"),
        ("nu_grid = [0.0", "nu_grid = [-1.0"),
    ] {
        assert!(base.contains(from), "fixture drifted: {from}");
        let text = base.replacen(from, to, 1);
        let res = SweepConfig::from_toml_str(&text).and_then(|c| c.points().map(|_| c));
        assert!(res.is_err(), "{to} accepted");
    }
    assert!(SweepConfig::from_toml_str(&format!("bogus = 1\n{base}")).is_err());
    // typo inside a grid entry
    assert!(SweepConfig::from_toml_str(&format!("{base}\nshape = [1.0]\n")).is_err());
    assert!(SweepConfig::preset("figure2").is_err());
}

#[test]
fn empty_point_list_gives_a_header_only_csv() {
    let csv = csv_string(&[]).unwrap();
    assert_eq!(csv, CSV_COLUMNS.join(",") + "\n");
}

#[test]
fn outputs_are_byte_identical_across_runs_and_execution_modes() {
    let cfg = small(SweepConfig::figure1());
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (k, exec) in [Execution::Parallel, Execution::Parallel, Execution::Serial].into_iter().enumerate() {
        let paths = OutputPaths::in_dir(&dir.path().join(k.to_string()), "figure1");
        let results = SuiteResults::new(&cfg, run_suite_with(&cfg, exec).unwrap()).unwrap();
        emit_outputs(&results, &paths).unwrap();
        let read = |p: &Option<PathBuf>| fs::read(p.as_ref().unwrap()).unwrap();
        files.push((read(&paths.csv), read(&paths.json), read(&paths.frontier_csv), read(&paths.plot)));
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));

    let csv = String::from_utf8(files[0].0.clone()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_COLUMNS.join(","));
    assert_eq!(lines.len() - 1, cfg.points().unwrap().len());
    let json: serde_json::Value = serde_json::from_slice(&files[0].1).unwrap();
    assert_eq!(json["seeds"], serde_json::json!([2019, 2020]));
    assert_eq!(json["config"]["name"], "figure1");
    let plot = String::from_utf8(files[0].3.clone()).unwrap();
    assert!(plot.contains("$lcfs_p_pareto << EOD") && plot.contains("plot $"));
}

#[test]
fn csv_floats_carry_twelve_significant_digits() {
    let cfg = small(SweepConfig::no_tradeoff());
    let csv = csv_string(&run_suite(&cfg).unwrap()).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), CSV_COLUMNS.len());
    let age = row[8];
    let mantissa = age.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 12, "{age}");
}
