//! Analytic baselines the simulator is checked against.
//!
//! - [`a_min`]: the zero-delay sawtooth, `E[X^2] / (2 E[X])`. No discipline or
//!   service law can beat it.
//! - [`gginf_age_estimate`]: average age of the infinite-server station,
//!   `a_min + E[Z]` with `Z = min_{l>=0} (X_1 + ... + X_l + S_{l+1})`,
//!   estimated by Monte Carlo.
//! - [`pk_delay`]: Pollaczek-Khinchine mean sojourn time for Poisson input.
//! - [`dd1_age`]: periodic generation with constant service under FCFS.
//! - [`lemma2_table`] / [`lemma3_table`]: tail, truncated-mean and
//!   second-moment columns along a heavy-tail sweep.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::{ArrivalProcess, DurationSampler, Extended, ServiceDistribution, ServiceFamily};
use crate::error::{Error, Result};

pub fn a_min(arrival: &ArrivalProcess) -> f64 {
    arrival.second_moment() / (2.0 * arrival.mean())
}

/// One draw of `Z` and how many `(X, S)` terms it consumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinTerm {
    pub value: f64,
    pub terms: usize,
}

/// `min_{l>=0} (x_1 + ... + x_l + s_{l+1})` over the supplied sequences.
///
/// Stops as soon as the running sum of `x` reaches the best candidate: every
/// later candidate adds a nonnegative `s` to a sum at least that large.
/// Returns the best value seen if either sequence runs out.
pub fn min_term<X, S>(mut xs: X, mut ss: S) -> MinTerm
where
    X: Iterator<Item = f64>,
    S: Iterator<Item = f64>,
{
    let Some(first) = ss.next() else {
        return MinTerm {
            value: f64::INFINITY,
            terms: 0,
        };
    };
    let mut best = first;
    let mut partial = 0.0;
    let mut terms = 1;
    loop {
        let Some(x) = xs.next() else { break };
        partial += x;
        if partial >= best {
            break;
        }
        let Some(s) = ss.next() else { break };
        terms += 1;
        best = best.min(partial + s);
    }
    MinTerm { value: best, terms }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GgInfEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Monte-Carlo mean of `Z`.
    pub mean_min_term: f64,
    pub n_samples: usize,
}

/// Average age of the G/G/inf station with the same input and service laws.
pub fn gginf_age_estimate(
    arrival: &ArrivalProcess,
    service: &ServiceDistribution,
    n_samples: usize,
    seed: u64,
) -> Result<GgInfEstimate> {
    if n_samples < 1000 {
        return Err(Error::domain(format!("need at least 1000 samples, got {n_samples}")));
    }
    let mut x_rng = ChaCha8Rng::seed_from_u64(seed);
    x_rng.set_stream(2);
    let mut s_rng = ChaCha8Rng::seed_from_u64(seed);
    s_rng.set_stream(3);

    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n_samples {
        let z = min_term(
            std::iter::repeat_with(|| arrival.sample(&mut x_rng)),
            std::iter::repeat_with(|| service.sample(&mut s_rng)),
        )
        .value;
        let d = z - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (z - mean);
    }
    let var = m2 / (n_samples - 1) as f64;
    Ok(GgInfEstimate {
        estimate: a_min(arrival) + mean,
        stderr: (var / n_samples as f64).sqrt(),
        mean_min_term: mean,
        n_samples,
    })
}

/// `(lambda/2) E[S^2] / (1 - rho) + E[S]`.
pub fn pk_delay(lambda: f64, service: &ServiceDistribution) -> Result<Extended> {
    let mu = service.mu();
    if !(lambda > 0.0 && lambda < mu) {
        return Err(Error::Stability { lambda, mu });
    }
    let rho = lambda / mu;
    let (mean, second) = service.moments();
    Ok(match second {
        Extended::Finite(s2) => Extended::Finite(0.5 * lambda * s2 / (1.0 - rho) + mean),
        Extended::Infinite => Extended::Infinite,
    })
}

/// `1/mu + 1/(2 lambda)`; `mu` may be `f64::INFINITY` (zero service time).
pub fn dd1_age(lambda: f64, mu: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < mu) {
        return Err(Error::Stability { lambda, mu });
    }
    Ok(1.0 / mu + 0.5 / lambda)
}

/// Lower bound on delay variance under any discipline: the service variance.
pub fn delay_variance_floor(service: &ServiceDistribution) -> Extended {
    service.variance()
}

/// Direction in which a family's shape parameter must move for the age to
/// approach its minimum.
pub fn limit_direction(family: ServiceFamily) -> Option<&'static str> {
    match family {
        ServiceFamily::Pareto => Some("alpha -> 1+"),
        ServiceFamily::LogNormal => Some("sigma -> +inf"),
        ServiceFamily::Weibull => Some("k -> 0+"),
        ServiceFamily::Deterministic | ServiceFamily::Exponential => None,
    }
}

fn check_sweep_order(family: ServiceFamily, shapes: &[f64]) -> Result<()> {
    if !family.has_shape() {
        return if shapes.is_empty() {
            Ok(())
        } else {
            Err(Error::domain(format!("{family} has no shape parameter to sweep")))
        };
    }
    let toward = |a: f64, b: f64| match family {
        ServiceFamily::LogNormal => b > a,
        _ => b < a,
    };
    if shapes.windows(2).all(|w| toward(w[0], w[1])) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{family} shape grid {shapes:?} is not ordered toward {}",
            limit_direction(family).unwrap_or_default()
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub shape: Option<f64>,
    pub x: Option<f64>,
    pub tail_prob: Option<f64>,
    pub truncated_mean: Option<f64>,
    pub second_moment: Extended,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable {
    pub family: ServiceFamily,
    pub mu: f64,
    pub direction: Option<&'static str>,
    pub shapes: Vec<f64>,
    pub xs: Vec<f64>,
    /// Shape-major: all x for the first shape, then the next shape.
    pub rows: Vec<LimitRow>,
    /// Both `P(S > x)` and `E[S 1{S<x}]` strictly decrease along the sweep at every x.
    pub monotone_decreasing: bool,
    /// `E[S^2]` strictly increases along the sweep and either hits the
    /// infinite branch (and stays there) or exceeds `threshold`.
    pub diverges: bool,
    pub threshold: f64,
}

impl LimitTable {
    pub fn column<F: Fn(&LimitRow) -> Option<f64>>(&self, x: f64, f: F) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.x == Some(x))
            .filter_map(f)
            .collect()
    }

    pub fn second_moments(&self) -> Vec<Extended> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for r in &self.rows {
            let key = r.shape.map(f64::to_bits);
            if !seen.contains(&key) {
                seen.push(key);
                out.push(r.second_moment);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Csv {
            path: "<stdout>".into(),
            source: e,
        };
        out.write_record(["family", "shape", "x", "tail_prob", "truncated_mean", "second_moment"])
            .map_err(io)?;
        let opt = |v: Option<f64>| v.map(crate::experiments::fmt_float).unwrap_or_default();
        for r in &self.rows {
            out.write_record([
                self.family.name().to_string(),
                opt(r.shape),
                opt(r.x),
                opt(r.tail_prob),
                opt(r.truncated_mean),
                crate::experiments::fmt_float(r.second_moment.to_f64()),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        })
    }
}

fn build_dist(family: ServiceFamily, mu: f64, shape: Option<f64>) -> Result<ServiceDistribution> {
    ServiceDistribution::new(family, mu, shape)
}

fn shape_points(shapes: &[f64]) -> Vec<Option<f64>> {
    if shapes.is_empty() {
        vec![None]
    } else {
        shapes.iter().copied().map(Some).collect()
    }
}

fn diverges(moments: &[Extended], threshold: f64) -> bool {
    if moments.len() < 2 {
        return false;
    }
    let mut hit_infinite = false;
    for w in moments.windows(2) {
        match (w[0], w[1]) {
            (Extended::Finite(a), Extended::Finite(b)) if b > a => {}
            (Extended::Finite(_), Extended::Infinite) => hit_infinite = true,
            (Extended::Infinite, Extended::Infinite) => hit_infinite = true,
            _ => return false,
        }
    }
    hit_infinite || moments.last().and_then(|m| m.finite()).is_some_and(|v| v > threshold)
}

fn default_threshold(mu: f64) -> f64 {
    1e6 / (mu * mu)
}

/// `P(S > x)` and `E[S 1{S<x}]` along a shape sweep, for every `x >= 1/lambda`.
pub fn lemma2_table(
    family: ServiceFamily,
    mu: f64,
    lambda: f64,
    shapes: &[f64],
    xs: &[f64],
) -> Result<LimitTable> {
    if xs.is_empty() {
        return Err(Error::domain("x grid is empty"));
    }
    if let Some(&bad) = xs.iter().find(|&&x| !(x >= 1.0 / lambda)) {
        return Err(Error::domain(format!("x = {bad} is below 1/lambda = {}", 1.0 / lambda)));
    }
    check_sweep_order(family, shapes)?;
    let mut rows = Vec::new();
    for shape in shape_points(shapes) {
        let d = build_dist(family, mu, shape)?;
        for &x in xs {
            rows.push(LimitRow {
                shape,
                x: Some(x),
                tail_prob: Some(d.tail_prob(x)),
                truncated_mean: Some(d.truncated_mean_below(x)),
                second_moment: d.moments().1,
            });
        }
    }
    let strictly_down = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|w| w[1] < w[0]);
    let mut table = LimitTable {
        family,
        mu,
        direction: limit_direction(family),
        shapes: shapes.to_vec(),
        xs: xs.to_vec(),
        rows,
        monotone_decreasing: false,
        diverges: false,
        threshold: default_threshold(mu),
    };
    table.monotone_decreasing = xs.iter().all(|&x| {
        strictly_down(&table.column(x, |r| r.tail_prob)) && strictly_down(&table.column(x, |r| r.truncated_mean))
    });
    table.diverges = diverges(&table.second_moments(), table.threshold);
    Ok(table)
}

/// `E[S^2]` along a shape sweep. `threshold` defaults to `1e6 / mu^2`.
pub fn lemma3_table(family: ServiceFamily, mu: f64, shapes: &[f64], threshold: Option<f64>) -> Result<LimitTable> {
    check_sweep_order(family, shapes)?;
    let rows = shape_points(shapes)
        .into_iter()
        .map(|shape| {
            let d = build_dist(family, mu, shape)?;
            Ok(LimitRow {
                shape,
                x: None,
                tail_prob: None,
                truncated_mean: None,
                second_moment: d.moments().1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = threshold.unwrap_or_else(|| default_threshold(mu));
    let moments: Vec<Extended> = rows.iter().map(|r| r.second_moment).collect();
    Ok(LimitTable {
        family,
        mu,
        direction: limit_direction(family),
        shapes: shapes.to_vec(),
        xs: Vec::new(),
        diverges: diverges(&moments, threshold),
        rows,
        monotone_decreasing: false,
        threshold,
    })
}
