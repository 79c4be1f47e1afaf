use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aoi_tradeoff::des::Execution;
use aoi_tradeoff::distributions::{ArrivalFamily, ArrivalProcess, ServiceFamily, ServiceSpec};
use aoi_tradeoff::experiments::{
    csv_string, emit_outputs, evaluate_point, fmt_float, GridEntry, GridPoint, OutputPaths, SuiteResults,
    SweepConfig,
};
use aoi_tradeoff::prelude::Discipline;
use aoi_tradeoff::{oracles, Result};

#[derive(Parser)]
#[command(name = "aoi-sim", version, about = "Age of information vs. delay in single-server update systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Scale {
    /// Packets generated per replication.
    #[arg(long)]
    n_arrivals: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run replications one after another instead of on the thread pool.
    #[arg(long)]
    serial: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate one configuration and print a CSV row.
    Simulate {
        #[arg(long, default_value = "exp")]
        arrival: ArrivalFamily,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// e.g. `det`, `exp`, `pareto alpha=1.5`, `lognormal sigma=2`, `weibull k=0.5`
        #[arg(long, default_value = "exp")]
        service: ServiceSpec,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
        /// fcfs, lcfs-p, lcfs-np or inf
        #[arg(long, default_value = "fcfs")]
        discipline: Discipline,
        #[arg(long, default_value_t = 0.1)]
        warmup: f64,
        #[command(flatten)]
        scale: Scale,
        /// Print the JSON object instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Run a sweep described by a TOML file or a builtin preset.
    Sweep {
        #[arg(required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// figure1, tradeoff-sweep or no-tradeoff
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[command(flatten)]
        scale: Scale,
        /// Write <name>.csv, <name>-frontier.csv, <name>.json, <name>.gp here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the figure1 preset.
    Figure1 {
        #[command(flatten)]
        scale: Scale,
        #[arg(long, default_value = "figure1-out")]
        out_dir: PathBuf,
    },
    /// Print analytic baselines as CSV.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Minimum achievable average age E[X^2]/(2E[X]).
    Amin {
        #[arg(long, default_value = "exp")]
        arrival: ArrivalFamily,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
    /// Pollaczek-Khinchine mean delay.
    Pk {
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value = "exp")]
        service: ServiceSpec,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
    },
    /// Average age of periodic generation with constant FCFS service.
    Dd1 {
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
    },
    /// Monte-Carlo average age of the infinite-server station.
    Gginf {
        #[arg(long, default_value = "exp")]
        arrival: ArrivalFamily,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value = "exp")]
        service: ServiceSpec,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Tail probability and truncated mean along a shape sweep.
    Lemma2 {
        #[arg(long)]
        family: ServiceFamily,
        #[arg(long, value_delimiter = ',')]
        shapes: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        x: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
    },
    /// Second moment along a shape sweep.
    Lemma3 {
        #[arg(long)]
        family: ServiceFamily,
        #[arg(long, value_delimiter = ',')]
        shapes: Vec<f64>,
        #[arg(long, default_value_t = 0.8)]
        mu: f64,
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn apply_scale(mut cfg: SweepConfig, s: &Scale) -> SweepConfig {
    if let Some(n) = s.n_arrivals {
        cfg.n_arrivals = n;
    }
    if let Some(r) = s.reps {
        cfg.n_reps = r;
    }
    if let Some(seed) = s.seed {
        cfg.base_seed = seed;
    }
    cfg
}

fn exec(s: &Scale) -> Execution {
    if s.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn run_sweep(cfg: SweepConfig, out_dir: Option<PathBuf>, exec: Execution) -> Result<()> {
    let paths = match out_dir {
        Some(dir) => OutputPaths::in_dir(&dir, if cfg.name.is_empty() { "sweep" } else { &cfg.name }),
        None => cfg.output.clone(),
    };
    let points = aoi_tradeoff::experiments::run_suite_with(&cfg, exec)?;
    let results = SuiteResults::new(&cfg, points)?;
    if paths == OutputPaths::default() {
        print!("{}", csv_string(&results.points)?);
    } else {
        emit_outputs(&results, &paths)?;
        for p in [&paths.csv, &paths.frontier_csv, &paths.json, &paths.plot].into_iter().flatten() {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut out = io::stdout().lock();
    match cli.cmd {
        Cmd::Simulate {
            arrival,
            lambda,
            service,
            mu,
            discipline,
            warmup,
            scale,
            json,
        } => {
            let base = SweepConfig {
                name: "simulate".into(),
                lambda,
                mu,
                arrival: arrival.name().into(),
                n_arrivals: 100_000,
                n_reps: 1,
                base_seed: 1,
                warmup_fraction: warmup,
                gginf_samples: 100_000,
                nu_grid: Vec::new(),
                grid: vec![GridEntry::new(&[discipline], service.family, &service.shape.into_iter().collect::<Vec<_>>())],
                output: OutputPaths::default(),
            };
            let cfg = apply_scale(base, &scale);
            cfg.validate()?;
            let gp = GridPoint {
                discipline,
                arrival: ArrivalProcess::new(arrival, lambda)?,
                service: service.with_rate(mu)?,
            };
            let point = evaluate_point(&cfg, &gp, exec(&scale))?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&point)?).ok();
            } else {
                write!(out, "{}", csv_string(&[point])?).ok();
            }
        }
        Cmd::Sweep {
            config,
            preset,
            scale,
            out_dir,
        } => {
            let cfg = match (config, preset) {
                (Some(path), _) => SweepConfig::from_path(&path)?,
                (None, Some(name)) => SweepConfig::preset(&name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let cfg = apply_scale(cfg, &scale);
            run_sweep(cfg, out_dir, exec(&scale))?;
        }
        Cmd::Figure1 { scale, out_dir } => {
            let cfg = apply_scale(SweepConfig::figure1(), &scale);
            run_sweep(cfg, Some(out_dir), exec(&scale))?;
        }
        Cmd::Oracle { which } => match which {
            OracleCmd::Amin { arrival, lambda } => {
                let a = ArrivalProcess::new(arrival, lambda)?;
                writeln!(out, "arrival,lambda,a_min\n{arrival},{},{}", fmt_float(lambda), fmt_float(oracles::a_min(&a))).ok();
            }
            OracleCmd::Pk { lambda, service, mu } => {
                let d = service.with_rate(mu)?;
                let v = oracles::pk_delay(lambda, &d)?;
                writeln!(
                    out,
                    "service,lambda,mu,pk_delay\n{service},{},{},{}",
                    fmt_float(lambda),
                    fmt_float(mu),
                    fmt_float(v.to_f64())
                )
                .ok();
            }
            OracleCmd::Dd1 { lambda, mu } => {
                let v = oracles::dd1_age(lambda, mu)?;
                writeln!(out, "lambda,mu,dd1_age\n{},{},{}", fmt_float(lambda), fmt_float(mu), fmt_float(v)).ok();
            }
            OracleCmd::Gginf {
                arrival,
                lambda,
                service,
                mu,
                samples,
                seed,
            } => {
                let a = ArrivalProcess::new(arrival, lambda)?;
                let d = service.with_rate(mu)?;
                let g = oracles::gginf_age_estimate(&a, &d, samples, seed)?;
                writeln!(
                    out,
                    "arrival,service,lambda,mu,gginf_age,stderr,a_min\n{arrival},{service},{},{},{},{},{}",
                    fmt_float(lambda),
                    fmt_float(mu),
                    fmt_float(g.estimate),
                    fmt_float(g.stderr),
                    fmt_float(oracles::a_min(&a))
                )
                .ok();
            }
            OracleCmd::Lemma2 {
                family,
                shapes,
                x,
                lambda,
                mu,
            } => oracles::lemma2_table(family, mu, lambda, &shapes, &x)?.write_csv(&mut out)?,
            OracleCmd::Lemma3 {
                family,
                shapes,
                mu,
                threshold,
            } => oracles::lemma3_table(family, mu, &shapes, threshold)?.write_csv(&mut out)?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
