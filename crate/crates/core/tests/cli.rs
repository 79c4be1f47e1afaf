use std::fs;
use std::process::{Command, Output};

use aoi_tradeoff::experiments::CSV_COLUMNS;

fn aoi_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoi-sim")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn simulate_prints_one_csv_row() {
    let out = stdout(&aoi_sim(&[
        "simulate",
        "--discipline",
        "lcfs-p",
        "--service",
        "pareto alpha=2",
        "--n-arrivals",
        "20000",
        "--reps",
        "2",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_COLUMNS.join(","));
    assert!(lines[1].starts_with("lcfs-p,pareto,2.00000000000e0,"), "{}", lines[1]);
}

#[test]
fn simulate_json_is_parseable() {
    let out = stdout(&aoi_sim(&["simulate", "--arrival", "det", "--service", "det", "--n-arrivals", "5000", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["avg_age"].as_f64().unwrap() - 2.25).abs() < 1e-9);
}

#[test]
fn oracle_tables() {
    let pk = stdout(&aoi_sim(&["oracle", "pk", "--service", "exp"]));
    assert!(pk.lines().nth(1).unwrap().ends_with(",3.33333333333e0"), "{pk}");

    let dd1 = stdout(&aoi_sim(&["oracle", "dd1"]));
    assert!(dd1.contains("2.25000000000e0"));

    let l2 = stdout(&aoi_sim(&["oracle", "lemma2", "--family", "pareto", "--shapes", "2,1.5,1.2,1.05"]));
    assert_eq!(l2.lines().count(), 1 + 4 * 2);

    let l3 = stdout(&aoi_sim(&["oracle", "lemma3", "--family", "pareto", "--shapes", "3,2.5,2,1.7,1.5"]));
    assert!(l3.contains("inf"));

    let amin = stdout(&aoi_sim(&["oracle", "amin", "--arrival", "det"]));
    assert!(amin.contains("1.00000000000e0"));

    let g = stdout(&aoi_sim(&["oracle", "gginf", "--service", "det", "--arrival", "det", "--samples", "2000"]));
    // periodic generation with constant service: min term is the service time itself
    assert!(g.lines().nth(1).unwrap().contains(",2.25000000000e0,0.00000000000e0,"), "{g}");
}

#[test]
fn sweep_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.toml");
    fs::write(
        &cfg,
        r#"
name = "tiny"
lambda = 0.5
mu = 0.8
arrival = "exp"
n_arrivals = 3000
n_reps = 2
base_seed = 5
gginf_samples = 1000
nu_grid = [0.0, 1.0]

[[grid]]
disciplines = ["fcfs", "lcfs-p", "lcfs-np", "inf"]
family = "weibull"
shapes = [0.5, 2.0]
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    stdout(&aoi_sim(&["sweep", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]));
    for f in ["tiny.csv", "tiny-frontier.csv", "tiny.json", "tiny.gp"] {
        assert!(out_dir.join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(out_dir.join("tiny.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 8);
}

#[test]
fn figure1_and_presets_accept_scale_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&aoi_sim(&["figure1", "--n-arrivals", "2000", "--reps", "1", "--out-dir", d]));
    let csv = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 18);

    let out = stdout(&aoi_sim(&["sweep", "--preset", "no-tradeoff", "--n-arrivals", "2000", "--reps", "1"]));
    assert_eq!(out.lines().count(), 1 + 8);
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let out = aoi_sim(&["simulate", "--lambda", "0.9", "--mu", "0.8"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error:"), "{err}");

    let out = aoi_sim(&["simulate", "--service", "pareto alpha=0.5"]);
    assert!(!out.status.success());

    let out = aoi_sim(&["sweep", "/nonexistent/config.toml"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/config.toml"));
}
