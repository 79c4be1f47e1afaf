//! Service-time families with a common mean, their moments, and sampling.

use aoi_tradeoff::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> aoi_tradeoff::Result<()> {
    let mu = 0.8;
    let laws = [
        ServiceDistribution::deterministic(mu)?,
        ServiceDistribution::exponential(mu)?,
        ServiceDistribution::pareto(mu, 3.0)?,
        ServiceDistribution::pareto(mu, 1.5)?,
        ServiceDistribution::lognormal(mu, 1.0)?,
        ServiceDistribution::lognormal(mu, 2.0)?,
        ServiceDistribution::weibull(mu, 0.5)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:<20} {:>8} {:>12} {:>10} {:>10} {:>12}", "law", "mean", "E[S^2]", "median", "P(S>4)", "sample mean");
    for d in &laws {
        let n = 200_000;
        let sample: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        println!(
            "{:<20} {:>8.4} {:>12.4} {:>10.4} {:>10.5} {:>12.4}",
            d.spec().to_string(),
            d.mean(),
            d.moments().1,
            d.median(),
            d.tail_prob(4.0),
            sample
        );
    }
    let p = ServiceDistribution::pareto(mu, 1.5)?;
    println!("\npareto alpha=1.5 has scale {:.5}", p.pareto_scale().unwrap());
    println!("E[min(S, 2)] = {:.5}", p.expected_min_with(2.0));
    println!("E[S 1{{S<2}}] + 2 P(S>2) = {:.5}", p.truncated_mean_below(2.0) + 2.0 * p.tail_prob(2.0));
    Ok(())
}
