//! Geometric Brownian motion null model.
//!
//! Replicas use the exact log-normal step with `dt = 1` trading day:
//! `x(t+1) = x(t)·exp((μ − σ²/2) + σ·Z_t)`.
//!
//! Randomness is counter based: replica `r` of seed `s` draws from a ChaCha20
//! generator seeded with `s` and switched to stream `r`, so any replica can be
//! regenerated alone. Normal deviates come from `rand_distr::StandardNormal`
//! (ziggurat); together with the locked crate versions this fixes the output
//! bit for bit.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::market_data::PriceSeries;

/// Default number of replicas generated per fitted stock.
pub const DEFAULT_REPLICAS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GbmParams {
    /// Drift per trading day.
    pub mu: f64,
    /// Volatility per square-root trading day.
    pub sigma: f64,
    pub x0: f64,
    /// Length in trading days.
    pub len: usize,
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParams(format!("mu must be finite, got {}", self.mu)));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::InvalidParams(format!("x0 must be positive, got {}", self.x0)));
        }
        if self.len < 2 {
            return Err(Error::InvalidParams(format!("length must be >= 2, got {}", self.len)));
        }
        Ok(())
    }

    /// Writes `mu,sigma,x0,T`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["mu", "sigma", "x0", "T"])?;
        writer.write_record([
            fmt_f64(self.mu),
            fmt_f64(self.sigma),
            fmt_f64(self.x0),
            self.len.to_string(),
        ])?;
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }
}

/// Moment fit on daily log returns: `σ` is their sample standard deviation
/// (`n − 1` denominator), `μ = mean + σ²/2`.
pub fn fit_gbm(series: &PriceSeries) -> Result<GbmParams> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort {
            needed: 3,
            actual: series.len(),
        });
    }
    let returns: Vec<f64> = series.prices().windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let var = returns.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0);
    let sigma = var.sqrt();
    Ok(GbmParams {
        mu: mean + 0.5 * sigma * sigma,
        sigma,
        x0: series.first_price(),
        len: series.len(),
    })
}

fn replica_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Replica `index` of `seed`; a pure function of its arguments.
pub fn simulate_replica(params: &GbmParams, seed: u64, index: u64) -> Result<PriceSeries> {
    params.validate()?;
    let mut rng = replica_rng(seed, index);
    let drift = params.mu - 0.5 * params.sigma * params.sigma;
    let mut log_level = 0.0;
    let mut prices = Vec::with_capacity(params.len);
    prices.push(params.x0);
    for _ in 1..params.len {
        let z: f64 = StandardNormal.sample(&mut rng);
        log_level += drift + params.sigma * z;
        let price = params.x0 * log_level.exp();
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "replica price left the representable range ({price}); reduce mu, sigma or T"
            )));
        }
        prices.push(price);
    }
    PriceSeries::from_prices(format!("gbm_{seed}_{index:04}"), prices)
}

#[derive(Debug, Clone)]
pub struct ReplicaSet {
    pub params: GbmParams,
    pub seed: u64,
    pub series: Vec<PriceSeries>,
}

impl ReplicaSet {
    pub fn count(&self) -> usize {
        self.series.len()
    }
}

/// Replicas `0..count` generated in parallel.
pub fn simulate_replicas(params: &GbmParams, seed: u64, count: usize) -> Result<ReplicaSet> {
    let series = (0..count as u64)
        .into_par_iter()
        .map(|index| simulate_replica(params, seed, index))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicaSet {
        params: *params,
        seed,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{synthesize_series, SyntheticKind};

    fn params(mu: f64, sigma: f64, len: usize) -> GbmParams {
        GbmParams {
            mu,
            sigma,
            x0: 100.0,
            len,
        }
    }

    fn daily_log_returns(s: &PriceSeries) -> Vec<f64> {
        s.prices().windows(2).map(|w| (w[1] / w[0]).ln()).collect()
    }

    #[test]
    fn deterministic_exponential_fits_exactly() {
        let prices = (0..500).map(|t| 100.0 * (0.001 * t as f64).exp()).collect();
        let fit = fit_gbm(&PriceSeries::from_prices("e", prices).unwrap()).unwrap();
        assert!(fit.sigma < 1e-12);
        assert!((fit.mu - 0.001).abs() < 1e-12);
        assert_eq!(fit.x0, 100.0);
        assert_eq!(fit.len, 500);
    }

    #[test]
    fn constant_series_fit() {
        let fit = fit_gbm(&synthesize_series(SyntheticKind::Constant { level: 7.0 }, 20).unwrap()).unwrap();
        assert_eq!(fit.mu, 0.0);
        assert_eq!(fit.sigma, 0.0);
    }

    #[test]
    fn short_series_cannot_be_fitted() {
        let s = PriceSeries::from_prices("s", vec![1.0, 2.0]).unwrap();
        assert!(matches!(fit_gbm(&s), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn noise_free_replica_is_exponential() {
        let s = simulate_replica(&params(0.002, 0.0, 300), 9, 0).unwrap();
        for t in 1..=300 {
            let expected = 100.0 * (0.002 * (t - 1) as f64).exp();
            assert!((s.price_at(t) - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn replicas_are_reproducible_and_distinct() {
        let p = params(0.0003, 0.02, 400);
        let a = simulate_replica(&p, 42, 3).unwrap();
        assert_eq!(a, simulate_replica(&p, 42, 3).unwrap());
        assert_ne!(a.prices(), simulate_replica(&p, 42, 4).unwrap().prices());
        assert_ne!(a.prices(), simulate_replica(&p, 43, 3).unwrap().prices());
        let set = simulate_replicas(&p, 42, 5).unwrap();
        assert_eq!(set.count(), 5);
        assert_eq!(set.series[3], a);
        assert!(set
            .series
            .iter()
            .all(|s| s.len() == 400 && s.prices().iter().all(|&x| x > 0.0)));
    }

    #[test]
    fn log_increments_have_the_right_moments() {
        let (mu, sigma, len) = (0.0005, 0.02, 20_001);
        let s = simulate_replica(&params(mu, sigma, len), 7, 0).unwrap();
        let r = daily_log_returns(&s);
        let n = r.len() as f64;
        let mean = r.iter().sum::<f64>() / n;
        let var = r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((mean - (mu - sigma * sigma / 2.0)).abs() < 4.0 * sigma / n.sqrt());
        let var_se = sigma * sigma * (2.0 / (n - 1.0)).sqrt();
        assert!((var - sigma * sigma).abs() < 4.0 * var_se);
    }

    #[test]
    fn terminal_log_return_law_of_large_numbers() {
        let (mu, sigma, len) = (0.0004, 0.015, 251);
        let p = params(mu, sigma, len);
        let set = simulate_replicas(&p, 2024, 1000).unwrap();
        let totals: Vec<f64> = set
            .series
            .iter()
            .map(|s| (s.last_price() / s.first_price()).ln())
            .collect();
        let mean = totals.iter().sum::<f64>() / totals.len() as f64;
        let expected = (mu - sigma * sigma / 2.0) * (len - 1) as f64;
        let se = sigma * ((len - 1) as f64).sqrt() / (totals.len() as f64).sqrt();
        assert!((mean - expected).abs() < 4.0 * se, "{mean} vs {expected}");
    }

    #[test]
    fn replicas_are_uncorrelated() {
        let p = params(0.0, 0.02, 5001);
        let a = daily_log_returns(&simulate_replica(&p, 1, 0).unwrap());
        let b = daily_log_returns(&simulate_replica(&p, 1, 1).unwrap());
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let rho = cov / (va * vb).sqrt();
        assert!(rho.abs() < 4.0 / n.sqrt(), "rho = {rho}");
    }

    #[test]
    fn invalid_params() {
        assert!(simulate_replica(&params(0.0, -0.1, 10), 0, 0).is_err());
        assert!(simulate_replica(
            &GbmParams {
                x0: 0.0,
                ..params(0.0, 0.1, 10)
            },
            0,
            0
        )
        .is_err());
        assert!(simulate_replica(&params(0.0, 0.1, 1), 0, 0).is_err());
    }
}
