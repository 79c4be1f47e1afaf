//! Config-driven sweeps over (discipline, service law, shape), Pareto
//! frontiers of the resulting age/delay points, scalarized picks, and output
//! files.
//!
//! A sweep file is TOML:
//!
//! ```toml
//! name = "figure1"
//! lambda = 0.5
//! mu = 0.8
//! arrival = "exp"            # "det" for periodic generation
//! n_arrivals = 1000000
//! n_reps = 8
//! base_seed = 2019
//! warmup_fraction = 0.1
//! gginf_samples = 100000     # 0 skips the G/G/inf column
//! nu_grid = [0.0, 0.1, 0.5, 1.0, 5.0, 100.0]
//!
//! [[grid]]
//! disciplines = ["fcfs", "lcfs-p"]
//! family = "pareto"
//! shapes = [3.0, 2.0, 1.5]
//! # arrival = "det"         # optional per-entry override
//!
//! [output]                   # all optional
//! csv = "out/figure1.csv"
//! json = "out/figure1.json"
//! plot = "out/figure1.gp"
//! ```
//!
//! Every grid point of a sweep reuses `base_seed`, so points differ only in
//! discipline and service law, never in the random input streams.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::des::{map_replications, Execution, ExperimentPoint};
use crate::disciplines::Discipline;
use crate::distributions::{ArrivalFamily, ArrivalProcess, Extended, ServiceDistribution, ServiceFamily, ServiceSpec};
use crate::error::{Error, Result};
use crate::metrics::{MetricsReport, ReplicatedMetrics};
use crate::oracles;

/// Pareto shapes below this are reported but not trusted for CI claims.
pub const SLOW_CONVERGENCE_ALPHA: f64 = 1.5;

pub const CSV_COLUMNS: [&str; 17] = [
    "discipline",
    "family",
    "shape",
    "lambda",
    "mu",
    "n_arrivals",
    "n_reps",
    "seed",
    "avg_age",
    "avg_age_ci",
    "mean_delay",
    "mean_delay_ci",
    "delay_var",
    "informative_frac",
    "a_min",
    "pk_delay",
    "gginf_age",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub disciplines: Vec<String>,
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shapes: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival: Option<String>,
}

impl GridEntry {
    pub fn new(disciplines: &[Discipline], family: ServiceFamily, shapes: &[f64]) -> Self {
        GridEntry {
            disciplines: disciplines.iter().map(|d| d.name().to_string()).collect(),
            family: family.name().to_string(),
            shapes: shapes.to_vec(),
            arrival: None,
        }
    }

    pub fn with_arrival(mut self, arrival: ArrivalFamily) -> Self {
        self.arrival = Some(arrival.name().to_string());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

impl OutputPaths {
    /// `<dir>/<stem>.csv`, `<stem>-frontier.csv`, `<stem>.json`, `<stem>.gp`.
    pub fn in_dir(dir: &Path, stem: &str) -> Self {
        OutputPaths {
            csv: Some(dir.join(format!("{stem}.csv"))),
            frontier_csv: Some(dir.join(format!("{stem}-frontier.csv"))),
            json: Some(dir.join(format!("{stem}.json"))),
            plot: Some(dir.join(format!("{stem}.gp"))),
        }
    }
}

fn default_warmup() -> f64 {
    0.1
}

fn default_gginf_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub name: String,
    pub lambda: f64,
    pub mu: f64,
    pub arrival: String,
    pub n_arrivals: usize,
    pub n_reps: usize,
    pub base_seed: u64,
    #[serde(default = "default_warmup")]
    pub warmup_fraction: f64,
    #[serde(default = "default_gginf_samples")]
    pub gginf_samples: usize,
    #[serde(default)]
    pub nu_grid: Vec<f64>,
    pub grid: Vec<GridEntry>,
    #[serde(default)]
    pub output: OutputPaths,
}

/// One fully resolved grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub discipline: Discipline,
    pub arrival: ArrivalProcess,
    pub service: ServiceDistribution,
}

impl GridPoint {
    pub fn label(&self) -> String {
        let mut s = format!("{} {}", self.discipline, self.service.spec());
        if self.arrival.family() == ArrivalFamily::Deterministic {
            s.push_str(" periodic");
        }
        s
    }
}

impl SweepConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(s).map_err(|e| Error::parse("sweep config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("sweep config always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        ArrivalProcess::new(self.arrival.parse()?, self.lambda)?;
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::domain(format!("mu must be positive, got {}", self.mu)));
        }
        if self.n_arrivals == 0 || self.n_reps == 0 {
            return Err(Error::domain("n_arrivals and n_reps must be at least 1"));
        }
        if !(0.0..=0.5).contains(&self.warmup_fraction) {
            return Err(Error::domain("warmup_fraction must lie in [0, 0.5]"));
        }
        if self.grid.is_empty() {
            return Err(Error::domain("grid is empty"));
        }
        if let Some(nu) = self.nu_grid.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::domain(format!("nu must be nonnegative, got {nu}")));
        }
        for e in &self.grid {
            if e.disciplines.is_empty() {
                return Err(Error::domain(format!("grid entry `{}` lists no disciplines", e.family)));
            }
            let family: ServiceFamily = e.family.parse()?;
            if family.has_shape() && e.shapes.is_empty() {
                return Err(Error::domain(format!("grid entry `{family}` needs a nonempty shapes list")));
            }
        }
        Ok(())
    }

    /// Grid points in file order: entry, then discipline, then shape.
    pub fn points(&self) -> Result<Vec<GridPoint>> {
        let default_arrival: ArrivalFamily = self.arrival.parse()?;
        let mut out = Vec::new();
        for e in &self.grid {
            let family: ServiceFamily = e.family.parse()?;
            let arrival_family = match &e.arrival {
                Some(a) => a.parse()?,
                None => default_arrival,
            };
            let arrival = ArrivalProcess::new(arrival_family, self.lambda)?;
            let shapes: Vec<Option<f64>> = if family.has_shape() {
                e.shapes.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for d in &e.disciplines {
                let discipline: Discipline = d.parse()?;
                for &shape in &shapes {
                    let spec = ServiceSpec::new(family, shape);
                    let service = spec
                        .with_rate(self.mu)
                        .map_err(|err| err.at_point(format!("{discipline} {spec}")))?;
                    out.push(GridPoint {
                        discipline,
                        arrival,
                        service,
                    });
                }
            }
        }
        Ok(out)
    }

    fn base(name: &str, arrival: ArrivalFamily, grid: Vec<GridEntry>) -> Self {
        SweepConfig {
            name: name.to_string(),
            lambda: 0.5,
            mu: 0.8,
            arrival: arrival.name().to_string(),
            n_arrivals: 1_000_000,
            n_reps: 8,
            base_seed: 2019,
            warmup_fraction: 0.1,
            gginf_samples: default_gginf_samples(),
            nu_grid: vec![0.0, 0.1, 0.5, 1.0, 5.0, 100.0],
            grid,
            output: OutputPaths::default(),
        }
    }

    /// Poisson generation at 0.5, service rate 0.8, FCFS and LCFS-P over
    /// deterministic, exponential and the three heavy-tailed families.
    pub fn figure1() -> Self {
        use Discipline::{Fcfs, LcfsPreemptiveResume};
        let both = [Fcfs, LcfsPreemptiveResume];
        Self::base(
            "figure1",
            ArrivalFamily::Exponential,
            vec![
                GridEntry::new(&both, ServiceFamily::Deterministic, &[]),
                GridEntry::new(&both, ServiceFamily::Exponential, &[]),
                GridEntry::new(&both, ServiceFamily::Pareto, &[3.0, 2.0, 1.5]),
                GridEntry::new(&both, ServiceFamily::LogNormal, &[1.0, 2.0]),
                GridEntry::new(&both, ServiceFamily::Weibull, &[1.0, 0.5]),
            ],
        )
    }

    /// Heavy-tail sweeps toward each family's age-minimizing limit.
    pub fn tradeoff_sweep() -> Self {
        use Discipline::{Fcfs, LcfsPreemptiveResume};
        Self::base(
            "tradeoff-sweep",
            ArrivalFamily::Exponential,
            vec![
                GridEntry::new(&[LcfsPreemptiveResume, Fcfs], ServiceFamily::Pareto, &[3.0, 2.5, 2.0, 1.7, 1.5]),
                GridEntry::new(&[LcfsPreemptiveResume], ServiceFamily::LogNormal, &[0.5, 1.0, 1.5, 2.0]),
                GridEntry::new(&[LcfsPreemptiveResume], ServiceFamily::Weibull, &[1.0, 0.7, 0.5, 0.3]),
            ],
        )
    }

    /// Exponential service under FCFS and LCFS-P with Poisson input, and FCFS
    /// with periodic input over several service laws.
    pub fn no_tradeoff() -> Self {
        use Discipline::{Fcfs, LcfsPreemptiveResume};
        let periodic = ArrivalFamily::Deterministic;
        Self::base(
            "no-tradeoff",
            ArrivalFamily::Exponential,
            vec![
                GridEntry::new(&[Fcfs, LcfsPreemptiveResume], ServiceFamily::Exponential, &[]),
                GridEntry::new(&[Fcfs], ServiceFamily::Deterministic, &[]).with_arrival(periodic),
                GridEntry::new(&[Fcfs], ServiceFamily::Exponential, &[]).with_arrival(periodic),
                GridEntry::new(&[Fcfs], ServiceFamily::Pareto, &[3.0, 2.0]).with_arrival(periodic),
                GridEntry::new(&[Fcfs], ServiceFamily::LogNormal, &[1.0]).with_arrival(periodic),
                GridEntry::new(&[Fcfs], ServiceFamily::Weibull, &[0.5]).with_arrival(periodic),
            ],
        )
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "figure1" => Ok(Self::figure1()),
            "tradeoff-sweep" => Ok(Self::tradeoff_sweep()),
            "no-tradeoff" => Ok(Self::no_tradeoff()),
            other => Err(Error::parse("preset", format!("unknown preset `{other}`"))),
        }
    }

    pub fn with_scale(mut self, n_arrivals: usize, n_reps: usize) -> Self {
        self.n_arrivals = n_arrivals;
        self.n_reps = n_reps;
        self
    }
}

/// One aggregated point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub label: String,
    pub discipline: Discipline,
    pub arrival: ArrivalFamily,
    pub family: ServiceFamily,
    pub shape: Option<f64>,
    pub lambda: f64,
    pub mu: f64,
    pub n_arrivals: usize,
    pub n_reps: usize,
    pub seed: u64,
    pub avg_age: f64,
    pub avg_age_ci: f64,
    pub mean_delay: f64,
    pub mean_delay_ci: f64,
    pub delay_var: f64,
    pub delay_var_ci: f64,
    pub informative_frac: f64,
    pub a_min: f64,
    /// Only defined for Poisson input and finite `lambda < mu`.
    pub pk_delay: Option<Extended>,
    pub gginf_age: Option<f64>,
    pub gginf_stderr: Option<f64>,
    pub slow_convergence: bool,
}

impl FrontierPoint {
    pub fn objective(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Delay => self.mean_delay,
            Objective::DelayVariance => self.delay_var,
        }
    }

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.discipline.name().to_string(),
            self.family.name().to_string(),
            self.shape.map(fmt_float).unwrap_or_default(),
            fmt_float(self.lambda),
            fmt_float(self.mu),
            self.n_arrivals.to_string(),
            self.n_reps.to_string(),
            self.seed.to_string(),
            fmt_float(self.avg_age),
            fmt_float(self.avg_age_ci),
            fmt_float(self.mean_delay),
            fmt_float(self.mean_delay_ci),
            fmt_float(self.delay_var),
            fmt_float(self.informative_frac),
            fmt_float(self.a_min),
            self.pk_delay.map(|v| fmt_float(v.to_f64())).unwrap_or_default(),
            self.gginf_age.map(fmt_float).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "delay")]
    Delay,
    #[serde(rename = "delay_variance")]
    DelayVariance,
}

/// Simulates and aggregates one grid point.
pub fn evaluate_point(cfg: &SweepConfig, gp: &GridPoint, exec: Execution) -> Result<FrontierPoint> {
    let label = gp.label();
    let point = ExperimentPoint::new(gp.arrival, gp.service, gp.discipline, cfg.n_arrivals, cfg.warmup_fraction);
    let reports = map_replications(&point, cfg.n_reps, cfg.base_seed, exec, |tr| MetricsReport::from_trace(&tr))
        .map_err(|e| e.at_point(&label))?;
    let m = ReplicatedMetrics::pool(&reports).map_err(|e| e.at_point(&label))?;

    let pk = match gp.arrival.family() {
        ArrivalFamily::Exponential => oracles::pk_delay(gp.arrival.lambda(), &gp.service).ok(),
        ArrivalFamily::Deterministic => None,
    };
    let gginf = if cfg.gginf_samples > 0 {
        Some(
            oracles::gginf_age_estimate(&gp.arrival, &gp.service, cfg.gginf_samples.max(1000), cfg.base_seed)
                .map_err(|e| e.at_point(&label))?,
        )
    } else {
        None
    };
    let shape = gp.service.shape();
    Ok(FrontierPoint {
        label,
        discipline: gp.discipline,
        arrival: gp.arrival.family(),
        family: gp.service.family(),
        shape,
        lambda: gp.arrival.lambda(),
        mu: gp.service.mu(),
        n_arrivals: cfg.n_arrivals,
        n_reps: cfg.n_reps,
        seed: cfg.base_seed,
        avg_age: m.avg_age,
        avg_age_ci: m.avg_age_ci,
        mean_delay: m.mean_delay,
        mean_delay_ci: m.mean_delay_ci,
        delay_var: m.delay_variance,
        delay_var_ci: m.delay_variance_ci,
        informative_frac: m.informative_fraction,
        a_min: oracles::a_min(&gp.arrival),
        pk_delay: pk,
        gginf_age: gginf.map(|g| g.estimate),
        gginf_stderr: gginf.map(|g| g.stderr),
        slow_convergence: gp.service.family() == ServiceFamily::Pareto
            && shape.is_some_and(|a| a < SLOW_CONVERGENCE_ALPHA),
    })
}

/// One [`FrontierPoint`] per grid point, in grid order.
pub fn run_suite(cfg: &SweepConfig) -> Result<Vec<FrontierPoint>> {
    run_suite_with(cfg, Execution::Parallel)
}

pub fn run_suite_with(cfg: &SweepConfig, exec: Execution) -> Result<Vec<FrontierPoint>> {
    cfg.validate()?;
    let points = cfg.points()?;
    // fail fast on unstable points before spending time on the others
    for gp in &points {
        if gp.discipline.is_single_server() {
            gp.arrival
                .check_stable(gp.service.mu())
                .map_err(|e| e.at_point(gp.label()))?;
        }
    }
    points.iter().map(|gp| evaluate_point(cfg, gp, exec)).collect()
}

fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)
}

/// Non-dominated subset under componentwise `<=` on `(avg_age, objective)`,
/// sorted by age.
pub fn pareto_frontier(points: &[FrontierPoint], objective: Objective) -> Vec<FrontierPoint> {
    let coords: Vec<(f64, f64)> = points.iter().map(|p| (p.avg_age, p.objective(objective))).collect();
    let mut front: Vec<FrontierPoint> = points
        .iter()
        .zip(&coords)
        .filter(|(_, c)| !coords.iter().any(|o| dominates(*o, **c)))
        .map(|(p, _)| p.clone())
        .collect();
    front.sort_by(|a, b| {
        a.avg_age
            .total_cmp(&b.avg_age)
            .then(a.objective(objective).total_cmp(&b.objective(objective)))
            .then_with(|| a.label.cmp(&b.label))
    });
    front
}

/// Point minimizing `objective + nu * avg_age`; ties go to the lower age,
/// then to the lexicographically smaller label.
pub fn scalarized_pick(points: &[FrontierPoint], nu: f64, objective: Objective) -> Result<FrontierPoint> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!("nu must be nonnegative, got {nu}")));
    }
    points
        .iter()
        .min_by(|a, b| {
            let sa = a.objective(objective) + nu * a.avg_age;
            let sb = b.objective(objective) + nu * b.avg_age;
            sa.total_cmp(&sb)
                .then(a.avg_age.total_cmp(&b.avg_age))
                .then_with(|| a.label.cmp(&b.label))
        })
        .cloned()
        .ok_or_else(|| Error::domain("no points to pick from"))
}

/// 12 significant digits, `inf`/`nan` spelled out.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.11e}")
    }
}

pub fn csv_string(points: &[FrontierPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Csv {
        path: "<memory>".into(),
        source: e,
    };
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for p in points {
        w.write_record(p.csv_record()).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarizedPick {
    pub nu: f64,
    pub objective: Objective,
    pub label: String,
    pub avg_age: f64,
    pub value: f64,
}

/// Everything a sweep produced, as written to the JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResults {
    pub crate_version: &'static str,
    pub config: SweepConfig,
    pub seeds: Vec<u64>,
    pub points: Vec<FrontierPoint>,
    pub frontier_delay: Vec<String>,
    pub frontier_delay_variance: Vec<String>,
    pub scalarized: Vec<ScalarizedPick>,
}

impl SuiteResults {
    pub fn new(cfg: &SweepConfig, points: Vec<FrontierPoint>) -> Result<Self> {
        let labels = |o| pareto_frontier(&points, o).into_iter().map(|p| p.label).collect();
        let mut scalarized = Vec::new();
        if !points.is_empty() {
            for objective in [Objective::Delay, Objective::DelayVariance] {
                for &nu in &cfg.nu_grid {
                    let p = scalarized_pick(&points, nu, objective)?;
                    scalarized.push(ScalarizedPick {
                        nu,
                        objective,
                        value: p.objective(objective) + nu * p.avg_age,
                        avg_age: p.avg_age,
                        label: p.label,
                    });
                }
            }
        }
        Ok(SuiteResults {
            crate_version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
            seeds: (0..cfg.n_reps).map(|r| crate::des::rep_seed(cfg.base_seed, r)).collect(),
            frontier_delay: labels(Objective::Delay),
            frontier_delay_variance: labels(Objective::DelayVariance),
            points,
            scalarized,
        })
    }

    pub fn json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn series_key(p: &FrontierPoint) -> String {
    let arrival = match p.arrival {
        ArrivalFamily::Deterministic => "_periodic",
        ArrivalFamily::Exponential => "",
    };
    format!("{}_{}{}", p.discipline.name(), p.family.name(), arrival).replace('-', "_")
}

/// gnuplot script with inline data blocks: average age on x, mean delay on
/// y, one series per (discipline, family).
pub fn plot_script(title: &str, points: &[FrontierPoint]) -> String {
    let mut series: BTreeMap<String, Vec<&FrontierPoint>> = BTreeMap::new();
    for p in points {
        series.entry(series_key(p)).or_default().push(p);
    }
    let mut s = String::new();
    let _ = writeln!(s, "# age/delay scatter; run with: gnuplot -p <this file>");
    let _ = writeln!(s, "set title \"{title}\"");
    let _ = writeln!(s, "set xlabel \"average age\"");
    let _ = writeln!(s, "set ylabel \"mean delay\"");
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set grid");
    for (key, pts) in &series {
        let _ = writeln!(s, "${key} << EOD");
        for p in pts {
            let delay = if p.mean_delay.is_finite() { fmt_float(p.mean_delay) } else { "NaN".into() };
            let _ = writeln!(s, "{} {} \"{}\"", fmt_float(p.avg_age), delay, p.shape.map(|v| v.to_string()).unwrap_or_default());
        }
        let _ = writeln!(s, "EOD");
    }
    let plots: Vec<String> = series
        .keys()
        .map(|k| format!("${k} using 1:2 with linespoints pointsize 1.5 title \"{}\"", k.replace('_', " ")))
        .collect();
    if !plots.is_empty() {
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes whichever of CSV, frontier CSV, JSON and plot script `paths` names.
pub fn emit_outputs(results: &SuiteResults, paths: &OutputPaths) -> Result<()> {
    if let Some(p) = &paths.csv {
        write_file(p, &csv_string(&results.points)?)?;
    }
    if let Some(p) = &paths.frontier_csv {
        let front = pareto_frontier(&results.points, Objective::Delay);
        write_file(p, &csv_string(&front)?)?;
    }
    if let Some(p) = &paths.json {
        write_file(p, &results.json_string()?)?;
    }
    if let Some(p) = &paths.plot {
        write_file(p, &plot_script(&results.config.name, &results.points))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(label: &str, age: f64, delay: f64) -> FrontierPoint {
        FrontierPoint {
            label: label.into(),
            discipline: Discipline::Fcfs,
            arrival: ArrivalFamily::Exponential,
            family: ServiceFamily::Exponential,
            shape: None,
            lambda: 0.5,
            mu: 0.8,
            n_arrivals: 10,
            n_reps: 1,
            seed: 0,
            avg_age: age,
            avg_age_ci: 0.0,
            mean_delay: delay,
            mean_delay_ci: 0.0,
            delay_var: delay * 2.0,
            delay_var_ci: 0.0,
            informative_frac: 1.0,
            a_min: 2.0,
            pk_delay: None,
            gginf_age: None,
            gginf_stderr: None,
            slow_convergence: false,
        }
    }

    #[test]
    fn frontier_drops_dominated() {
        let pts = vec![fp("a", 1.0, 3.0), fp("b", 2.0, 2.0), fp("c", 3.0, 1.0), fp("d", 2.0, 3.0)];
        let f: Vec<String> = pareto_frontier(&pts, Objective::Delay).into_iter().map(|p| p.label).collect();
        assert_eq!(f, vec!["a", "b", "c"]);
        let single = vec![fp("x", 1.0, 1.0)];
        assert_eq!(pareto_frontier(&single, Objective::Delay).len(), 1);
    }

    #[test]
    fn scalarized_extremes() {
        let pts = vec![fp("a", 1.0, 3.0), fp("b", 2.0, 2.0), fp("c", 3.0, 1.0), fp("d", 2.0, 3.0)];
        assert_eq!(scalarized_pick(&pts, 0.0, Objective::Delay).unwrap().label, "c");
        assert_eq!(scalarized_pick(&pts, 1e6, Objective::Delay).unwrap().label, "a");
        assert!(scalarized_pick(&pts, -1.0, Objective::Delay).is_err());
        assert!(scalarized_pick(&[], 1.0, Objective::Delay).is_err());
        // tie at nu = 1: every frontier point scores 4; lowest age wins
        assert_eq!(scalarized_pick(&pts, 1.0, Objective::Delay).unwrap().label, "a");
    }

    #[test]
    fn empty_points_give_header_only_csv() {
        let s = csv_string(&[]).unwrap();
        assert_eq!(s, CSV_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(fmt_float(2.25), "2.25000000000e0");
        assert_eq!(fmt_float(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn presets_expand() {
        let f = SweepConfig::figure1();
        let pts = f.points().unwrap();
        assert_eq!(pts.len(), 18);
        assert!(pts.iter().all(|p| p.arrival.lambda() == 0.5 && p.service.mu() == 0.8));
        assert!(SweepConfig::tradeoff_sweep().points().unwrap().len() >= 5);
        let nt = SweepConfig::no_tradeoff().points().unwrap();
        assert!(nt
            .iter()
            .any(|p| p.arrival.family() == ArrivalFamily::Deterministic
                && p.service.family() == ServiceFamily::Deterministic));
    }

    #[test]
    fn toml_round_trip_and_errors() {
        let cfg = SweepConfig::figure1();
        let text = cfg.to_toml_string();
        assert_eq!(SweepConfig::from_toml_str(&text).unwrap(), cfg);

        let mut bad = SweepConfig::figure1();
        bad.grid.clear();
        assert!(SweepConfig::from_toml_str(&bad.to_toml_string()).is_err());
        let mut bad = SweepConfig::figure1();
        bad.grid[2].shapes = vec![0.5];
        assert!(matches!(bad.points(), Err(Error::GridPoint { .. })));
        assert!(SweepConfig::from_toml_str("lambda = 0.5").is_err());
    }

    #[test]
    fn unstable_grid_names_point() {
        let mut cfg = SweepConfig::figure1().with_scale(100, 1);
        cfg.lambda = 0.9;
        let err = run_suite(&cfg).unwrap_err();
        match err {
            Error::GridPoint { label, source } => {
                assert!(label.contains("fcfs det"), "{label}");
                assert!(matches!(*source, Error::Stability { .. }));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn plot_script_has_one_series_per_key() {
        let mut a = fp("a", 1.0, 3.0);
        a.discipline = Discipline::LcfsPreemptiveResume;
        let pts = vec![a, fp("b", 2.0, 2.0)];
        let s = plot_script("t", &pts);
        assert!(s.contains("$lcfs_p_exp << EOD"));
        assert!(s.contains("$fcfs_exp << EOD"));
        assert!(s.contains("plot "));
    }
}
