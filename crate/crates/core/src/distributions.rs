//! Service-time and inter-generation distributions.
//!
//! Every service family is parameterized so that its mean is exactly `1/mu`;
//! the free shape parameter only moves mass between the body and the tail.
//!
//! | family      | law                                             | shape        |
//! |-------------|-------------------------------------------------|--------------|
//! | `det`       | `S = 1/mu`                                      | none         |
//! | `exp`       | `P(S > x) = exp(-mu x)`                         | none         |
//! | `lognormal` | `S = exp(-ln mu - sigma^2/2 + sigma N)`         | `sigma > 0`  |
//! | `pareto`    | `P(S > x) = (theta/x)^alpha`, `theta = (alpha-1)/(mu alpha)` | `alpha > 1` |
//! | `weibull`   | `P(S > x) = exp(-(x/beta)^k)`, `beta = 1/(mu Gamma(1+1/k))`  | `k > 0`     |
//!
//! Shape admissibility is checked when a distribution is built, so a
//! constructed [`ServiceDistribution`] can always be sampled.

use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// A nonnegative quantity that may diverge, such as `E[S^2]` for a Pareto
/// law with `alpha <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Lossy conversion for output columns; the infinite branch becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(v) => v,
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => fmt::Display::fmt(v, f),
            Extended::Infinite => f.pad("inf"),
        }
    }
}

/// Anything that yields positive i.i.d. durations from a seeded stream.
pub trait DurationSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ServiceFamily {
    Deterministic,
    Exponential,
    LogNormal,
    Pareto,
    Weibull,
}

impl ServiceFamily {
    pub fn name(self) -> &'static str {
        match self {
            ServiceFamily::Deterministic => "det",
            ServiceFamily::Exponential => "exp",
            ServiceFamily::LogNormal => "lognormal",
            ServiceFamily::Pareto => "pareto",
            ServiceFamily::Weibull => "weibull",
        }
    }

    /// Keyword naming the shape parameter in config strings.
    pub fn shape_key(self) -> Option<&'static str> {
        match self {
            ServiceFamily::Deterministic | ServiceFamily::Exponential => None,
            ServiceFamily::LogNormal => Some("sigma"),
            ServiceFamily::Pareto => Some("alpha"),
            ServiceFamily::Weibull => Some("k"),
        }
    }

    pub fn has_shape(self) -> bool {
        self.shape_key().is_some()
    }
}

impl FromStr for ServiceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "det" | "deterministic" => Ok(ServiceFamily::Deterministic),
            "exp" | "exponential" => Ok(ServiceFamily::Exponential),
            "lognormal" | "log-normal" => Ok(ServiceFamily::LogNormal),
            "pareto" => Ok(ServiceFamily::Pareto),
            "weibull" => Ok(ServiceFamily::Weibull),
            other => Err(Error::parse("service family", format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for ServiceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// A service family plus its shape, without the rate. This is what config
/// files and the CLI carry (`pareto alpha=1.5`, `det`, ...); the rate is
/// supplied separately through [`ServiceSpec::with_rate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceSpec {
    pub family: ServiceFamily,
    pub shape: Option<f64>,
}

impl ServiceSpec {
    pub fn new(family: ServiceFamily, shape: Option<f64>) -> Self {
        ServiceSpec { family, shape }
    }

    pub fn with_rate(self, mu: f64) -> Result<ServiceDistribution> {
        ServiceDistribution::new(self.family, mu, self.shape)
    }
}

impl FromStr for ServiceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let family: ServiceFamily = tokens
            .next()
            .ok_or_else(|| Error::parse("service spec", "empty string"))?
            .parse()?;
        let mut shape = None;
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse("service spec", format!("expected key=value, got `{tok}`")))?;
            if Some(key) != family.shape_key() {
                return Err(Error::parse(
                    "service spec",
                    format!("`{key}` is not a parameter of {family}"),
                ));
            }
            let v: f64 = value
                .parse()
                .map_err(|_| Error::parse("service spec", format!("bad number `{value}`")))?;
            shape = Some(v);
        }
        if family.has_shape() && shape.is_none() {
            return Err(Error::parse(
                "service spec",
                format!("{family} needs {}=<value>", family.shape_key().unwrap_or_default()),
            ));
        }
        Ok(ServiceSpec { family, shape })
    }
}

impl fmt::Display for ServiceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family.shape_key(), self.shape) {
            (Some(key), Some(v)) => write!(f, "{} {key}={v}", self.family),
            _ => write!(f, "{}", self.family),
        }
    }
}

/// Service-time law with mean pinned to `1/mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceDistribution {
    family: ServiceFamily,
    mu: f64,
    shape: Option<f64>,
    /// Location for log-normal, `theta` for Pareto, `beta` for Weibull.
    scale: f64,
}

impl ServiceDistribution {
    pub fn new(family: ServiceFamily, mu: f64, shape: Option<f64>) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::domain(format!("service rate mu must be positive, got {mu}")));
        }
        let shape = if family.has_shape() {
            let v = shape.ok_or_else(|| {
                Error::domain(format!("{family} requires {}", family.shape_key().unwrap_or_default()))
            })?;
            if !v.is_finite() {
                return Err(Error::domain(format!("{family} shape must be finite, got {v}")));
            }
            Some(v)
        } else {
            None
        };
        let scale = match (family, shape) {
            (ServiceFamily::Deterministic, _) | (ServiceFamily::Exponential, _) => 1.0 / mu,
            (ServiceFamily::LogNormal, Some(sigma)) => {
                if sigma <= 0.0 {
                    return Err(Error::domain(format!("lognormal requires sigma > 0, got {sigma}")));
                }
                -mu.ln() - 0.5 * sigma * sigma
            }
            (ServiceFamily::Pareto, Some(alpha)) => {
                if alpha <= 1.0 {
                    return Err(Error::domain(format!("pareto requires alpha > 1, got {alpha}")));
                }
                (alpha - 1.0) / (mu * alpha)
            }
            (ServiceFamily::Weibull, Some(k)) => {
                if k <= 0.0 {
                    return Err(Error::domain(format!("weibull requires k > 0, got {k}")));
                }
                let beta = (-mu.ln() - ln_gamma(1.0 + 1.0 / k)).exp();
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::domain(format!("weibull k = {k} too small to normalize")));
                }
                beta
            }
            _ => unreachable!("shape presence checked above"),
        };
        Ok(ServiceDistribution {
            family,
            mu,
            shape,
            scale,
        })
    }

    pub fn deterministic(mu: f64) -> Result<Self> {
        Self::new(ServiceFamily::Deterministic, mu, None)
    }

    pub fn exponential(mu: f64) -> Result<Self> {
        Self::new(ServiceFamily::Exponential, mu, None)
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(ServiceFamily::LogNormal, mu, Some(sigma))
    }

    pub fn pareto(mu: f64, alpha: f64) -> Result<Self> {
        Self::new(ServiceFamily::Pareto, mu, Some(alpha))
    }

    pub fn weibull(mu: f64, k: f64) -> Result<Self> {
        Self::new(ServiceFamily::Weibull, mu, Some(k))
    }

    pub fn family(&self) -> ServiceFamily {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn shape(&self) -> Option<f64> {
        self.shape
    }

    pub fn spec(&self) -> ServiceSpec {
        ServiceSpec::new(self.family, self.shape)
    }

    /// Pareto scale `theta(alpha)`; `None` for other families.
    pub fn pareto_scale(&self) -> Option<f64> {
        (self.family == ServiceFamily::Pareto).then_some(self.scale)
    }

    /// Weibull scale `beta(k)`; `None` for other families.
    pub fn weibull_scale(&self) -> Option<f64> {
        (self.family == ServiceFamily::Weibull).then_some(self.scale)
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.mu
    }

    /// `(E[S], E[S^2])` in closed form.
    pub fn moments(&self) -> (f64, Extended) {
        let m = self.mean();
        let second = match (self.family, self.shape) {
            (ServiceFamily::Deterministic, _) => Extended::Finite(m * m),
            (ServiceFamily::Exponential, _) => Extended::Finite(2.0 * m * m),
            (ServiceFamily::LogNormal, Some(sigma)) => Extended::Finite((sigma * sigma).exp() * m * m),
            (ServiceFamily::Pareto, Some(alpha)) => {
                if alpha <= 2.0 {
                    Extended::Infinite
                } else {
                    Extended::Finite(alpha * self.scale * self.scale / (alpha - 2.0))
                }
            }
            (ServiceFamily::Weibull, Some(k)) => {
                // Gamma(1+2/k) / Gamma(1+1/k)^2 / mu^2, in log space
                let log_ratio = ln_gamma(1.0 + 2.0 / k) - 2.0 * ln_gamma(1.0 + 1.0 / k);
                let v = log_ratio.exp() * m * m;
                if v.is_finite() {
                    Extended::Finite(v)
                } else {
                    // finite in exact arithmetic but beyond f64 range (k below ~0.004)
                    Extended::Infinite
                }
            }
            _ => unreachable!(),
        };
        (m, second)
    }

    pub fn variance(&self) -> Extended {
        let (m, s2) = self.moments();
        match s2 {
            Extended::Finite(v) => Extended::Finite((v - m * m).max(0.0)),
            Extended::Infinite => Extended::Infinite,
        }
    }

    pub fn median(&self) -> f64 {
        match (self.family, self.shape) {
            (ServiceFamily::Deterministic, _) => self.mean(),
            (ServiceFamily::Exponential, _) => std::f64::consts::LN_2 / self.mu,
            (ServiceFamily::LogNormal, _) => self.scale.exp(),
            (ServiceFamily::Pareto, Some(alpha)) => self.scale * 2f64.powf(1.0 / alpha),
            (ServiceFamily::Weibull, Some(k)) => self.scale * std::f64::consts::LN_2.powf(1.0 / k),
            _ => unreachable!(),
        }
    }

    /// Exact `P(S > x)`.
    pub fn tail_prob(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match (self.family, self.shape) {
            (ServiceFamily::Deterministic, _) => {
                if x < self.mean() {
                    1.0
                } else {
                    0.0
                }
            }
            (ServiceFamily::Exponential, _) => (-self.mu * x).exp(),
            (ServiceFamily::LogNormal, Some(sigma)) => {
                let z = (x.ln() - self.scale) / sigma;
                0.5 * erfc(z / std::f64::consts::SQRT_2)
            }
            (ServiceFamily::Pareto, Some(alpha)) => {
                if x <= self.scale {
                    1.0
                } else {
                    (self.scale / x).powf(alpha)
                }
            }
            (ServiceFamily::Weibull, Some(k)) => (-(x / self.scale).powf(k)).exp(),
            _ => unreachable!(),
        }
    }

    /// `E[min{S, x}] = integral of P(S > t) over [0, x]`.
    ///
    /// Closed forms for every family except Weibull, which is integrated
    /// numerically (adaptive Simpson). The 1e-12 tolerance is well inside the
    /// required 1e-8 and keeps the result monotone in `x` on fine grids.
    pub fn expected_min_with(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return self.mean();
        }
        let m = self.mean();
        match (self.family, self.shape) {
            (ServiceFamily::Deterministic, _) => m.min(x),
            (ServiceFamily::Exponential, _) => m * (-(-self.mu * x).exp_m1()),
            (ServiceFamily::LogNormal, Some(sigma)) => {
                // E[S 1{S<x}] = E[S] Phi((ln x - loc - sigma^2) / sigma)
                let d = (x.ln() - self.scale - sigma * sigma) / sigma;
                let below = m * std_normal_cdf(d);
                below + x * self.tail_prob(x)
            }
            (ServiceFamily::Pareto, Some(alpha)) => {
                let theta = self.scale;
                if x <= theta {
                    x
                } else {
                    theta + theta / (alpha - 1.0) * (1.0 - (theta / x).powf(alpha - 1.0))
                }
            }
            (ServiceFamily::Weibull, Some(_)) => {
                let tail = |t: f64| self.tail_prob(t);
                adaptive_simpson(&tail, 0.0, x, 1e-12).min(m)
            }
            _ => unreachable!(),
        }
    }

    /// `E[S 1{S < x}]`, obtained from `E[min{S,x}] - x P(S > x)`.
    pub fn truncated_mean_below(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return self.mean();
        }
        (self.expected_min_with(x) - x * self.tail_prob(x)).clamp(0.0, self.mean())
    }
}

impl DurationSampler for ServiceDistribution {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match (self.family, self.shape) {
            (ServiceFamily::Deterministic, _) => self.scale,
            (ServiceFamily::Exponential, _) => {
                let u: f64 = rng.sample(Open01);
                -u.ln() * self.scale
            }
            (ServiceFamily::LogNormal, Some(sigma)) => {
                let n: f64 = rng.sample(StandardNormal);
                (self.scale + sigma * n).exp().max(f64::MIN_POSITIVE)
            }
            (ServiceFamily::Pareto, Some(alpha)) => {
                let u: f64 = rng.sample(Open01);
                self.scale * u.powf(-1.0 / alpha)
            }
            (ServiceFamily::Weibull, Some(k)) => {
                let u: f64 = rng.sample(Open01);
                (self.scale * (-u.ln()).powf(1.0 / k)).max(f64::MIN_POSITIVE)
            }
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for ServiceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mu={}", self.spec(), self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrivalFamily {
    Deterministic,
    Exponential,
}

impl ArrivalFamily {
    pub fn name(self) -> &'static str {
        match self {
            ArrivalFamily::Deterministic => "det",
            ArrivalFamily::Exponential => "exp",
        }
    }
}

impl FromStr for ArrivalFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "det" | "deterministic" | "periodic" => Ok(ArrivalFamily::Deterministic),
            "exp" | "exponential" | "poisson" => Ok(ArrivalFamily::Exponential),
            other => Err(Error::parse("arrival family", format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for ArrivalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Renewal generation process with rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalProcess {
    family: ArrivalFamily,
    lambda: f64,
}

impl ArrivalProcess {
    pub fn new(family: ArrivalFamily, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!("arrival rate lambda must be positive, got {lambda}")));
        }
        Ok(ArrivalProcess { family, lambda })
    }

    pub fn periodic(lambda: f64) -> Result<Self> {
        Self::new(ArrivalFamily::Deterministic, lambda)
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(ArrivalFamily::Exponential, lambda)
    }

    pub fn family(&self) -> ArrivalFamily {
        self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn second_moment(&self) -> f64 {
        let m = self.mean();
        match self.family {
            ArrivalFamily::Deterministic => m * m,
            ArrivalFamily::Exponential => 2.0 * m * m,
        }
    }

    /// `Err` unless `lambda < mu`.
    pub fn check_stable(&self, mu: f64) -> Result<()> {
        if self.lambda < mu {
            Ok(())
        } else {
            Err(Error::Stability {
                lambda: self.lambda,
                mu,
            })
        }
    }
}

impl DurationSampler for ArrivalProcess {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.family {
            ArrivalFamily::Deterministic => self.mean(),
            ArrivalFamily::Exponential => {
                let u: f64 = rng.sample(Open01);
                -u.ln() * self.mean()
            }
        }
    }
}

impl fmt::Display for ArrivalProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lambda={}", self.family, self.lambda)
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Adaptive Simpson quadrature with Richardson correction.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
