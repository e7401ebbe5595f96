//! Monte Carlo estimation of E[I^{r−1}] from simulated subordinator paths.
//!
//! Each sample draws from its own ChaCha8 stream (seed, stream = sample
//! index), so results depend only on the seed and never on the number of
//! worker threads. Set `PERPETUA_THREADS` to cap the worker pool.

mod model;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::BernsteinFunction;
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::mellin::{i_gamma_ratio, DEFAULT_TOL};

pub use model::{JumpLaw, SubordinatorModel, DEFAULT_CUTOFF};

/// Smallest sample size accepted by the estimators.
pub const MIN_SAMPLES: usize = 1000;

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub dl: f64,
    /// Truncation horizon L; `None` picks L with e^{−LΦ(1)} < 1e−6.
    pub horizon: Option<f64>,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_samples: 10_000, dl: 1e-3, horizon: None, seed: 0 }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {}", self.n_samples)));
        }
        if !(self.dl > 0.0) || !self.dl.is_finite() {
            return Err(Error::InvalidParameter(format!("dl must be > 0, got {}", self.dl)));
        }
        if let Some(l) = self.horizon {
            if !(l >= self.dl) || !l.is_finite() {
                return Err(Error::InvalidParameter(format!("horizon must be ≥ dl, got {l}")));
            }
        }
        Ok(())
    }
}

/// Horizon L, a multiple of dl, with e^{−LΦ(1)} < 1e−6.
pub fn default_horizon(f: &BernsteinFunction, dl: f64) -> f64 {
    let l = 1e6f64.ln() / f.value(1.0);
    (l / dl).ceil() * dl
}

/// An estimate of E[I^{r−1}] with its sampling error and a bound on the
/// truncation and discretization bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerpetuityEstimate {
    pub r: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub dl: f64,
    pub truncation_l: f64,
    pub bias_bound: f64,
    pub seed: u64,
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("PERPETUA_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

/// Runs `f` on the pool selected by `PERPETUA_THREADS`, or the global one.
fn in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_pool() {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` samples of the truncated, discretized perpetuity.
pub fn simulate_perpetuities(model: &SubordinatorModel, dl: f64, horizon: f64, n: usize, seed: u64) -> Vec<f64> {
    in_pool(|| {
        (0..n)
            .into_par_iter()
            .map(|i| model.sample_perpetuity(dl, horizon, &mut stream_rng(seed, i as u64)))
            .collect()
    })
}

/// Draws `n` independent cell increments ξ_{dl}.
pub fn simulate_increments(model: &SubordinatorModel, dl: f64, n: usize, seed: u64) -> Vec<f64> {
    in_pool(|| {
        (0..n)
            .into_par_iter()
            .map(|i| model.sample_increment(dl, &mut stream_rng(seed, i as u64)))
            .collect()
    })
}

/// Sample mean and standard error, summed in index order.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Bound on |E[S^p] − E[I^p]| for the left Riemann sum S over [0, L),
/// p = r − 1, given m = E[I^p]. For p < 0 a first-order plug-in estimate
/// is returned instead, using `mean_pow_pm1` ≈ E[S^{p−1}].
pub fn bias_bound(f: &BernsteinFunction, p: f64, m: f64, dl: f64, horizon: f64, mean_pow_pm1: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        let truncation = p * (-horizon * f.value(p) / p).exp() * m;
        let discretization = (m.powf(1.0 / p) + dl).powf(p) - m;
        return truncation + discretization;
    }
    if p > 0.0 {
        return (-horizon * f.value(p)).exp() * m + dl.powf(p);
    }
    let mean_i = 1.0 / f.value(1.0);
    p.abs() * (dl + (-horizon * f.value(1.0)).exp() * mean_i) * mean_pow_pm1
}

/// E[I^{r−1}] against which the bias bound is scaled.
fn reference_mellin(entry: Option<&CatalogEntry>, f: &BernsteinFunction, r: f64) -> Result<f64> {
    if let Some(v) = entry.and_then(|e| e.closed_i(r)) {
        return Ok(v);
    }
    Ok(i_gamma_ratio(f, r, DEFAULT_TOL)?.value)
}

/// Estimates E[I^{r−1}] for an arbitrary model with exponent `f`.
pub fn estimate_mellin_i_with(
    model: &SubordinatorModel,
    f: &BernsteinFunction,
    r: f64,
    cfg: &McConfig,
) -> Result<PerpetuityEstimate> {
    estimate_inner(model, f, None, r, cfg)
}

fn estimate_inner(
    model: &SubordinatorModel,
    f: &BernsteinFunction,
    entry: Option<&CatalogEntry>,
    r: f64,
    cfg: &McConfig,
) -> Result<PerpetuityEstimate> {
    Ok(estimate_many(model, f, entry, &[r], cfg)?.remove(0))
}

/// Estimates for several r from one set of simulated paths.
fn estimate_many(
    model: &SubordinatorModel,
    f: &BernsteinFunction,
    entry: Option<&CatalogEntry>,
    rs: &[f64],
    cfg: &McConfig,
) -> Result<Vec<PerpetuityEstimate>> {
    cfg.validate()?;
    if let Some(&r) = rs.iter().find(|&&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Domain(format!("Mellin argument must be > 0, got {r}")));
    }
    let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(f, cfg.dl));
    let samples = simulate_perpetuities(model, cfg.dl, horizon, cfg.n_samples, cfg.seed);
    rs.iter()
        .map(|&r| {
            let p = r - 1.0;
            let powered: Vec<f64> = samples.iter().map(|s| s.powf(p)).collect();
            let (mean, stderr) = mean_and_stderr(&powered);
            let m = reference_mellin(entry, f, r)?;
            let mean_pm1 = if p < 0.0 {
                mean_and_stderr(&samples.iter().map(|s| s.powf(p - 1.0)).collect::<Vec<_>>()).0
            } else {
                0.0
            };
            Ok(PerpetuityEstimate {
                r,
                mean,
                stderr,
                n_samples: cfg.n_samples,
                dl: cfg.dl,
                truncation_l: horizon,
                bias_bound: bias_bound(f, p, m, cfg.dl, horizon, mean_pm1),
                seed: cfg.seed,
            })
        })
        .collect()
}

/// Estimates E[I^{r−1}] for each r in `rs`, all from the same paths.
pub fn estimate_mellin_i_many(entry: &CatalogEntry, rs: &[f64], cfg: &McConfig) -> Result<Vec<PerpetuityEstimate>> {
    let model = SubordinatorModel::for_entry(entry)?;
    estimate_many(&model, entry.function(), Some(entry), rs, cfg)
}

/// Estimates E[I^{r−1}] for a catalog entry.
pub fn estimate_mellin_i(entry: &CatalogEntry, r: f64, cfg: &McConfig) -> Result<PerpetuityEstimate> {
    let model = SubordinatorModel::for_entry(entry)?;
    estimate_inner(&model, entry.function(), Some(entry), r, cfg)
}

/// Repeats the estimate with dl halved `levels − 1` times and the same seed,
/// exposing the discretization bias.
pub fn refinement_study(entry: &CatalogEntry, r: f64, cfg: &McConfig, levels: usize) -> Result<Vec<PerpetuityEstimate>> {
    let model = SubordinatorModel::for_entry(entry)?;
    let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(entry.function(), cfg.dl));
    (0..levels)
        .map(|k| {
            let c = McConfig { dl: cfg.dl / 2f64.powi(k as i32), horizon: Some(horizon), ..*cfg };
            estimate_inner(&model, entry.function(), Some(entry), r, &c)
        })
        .collect()
}

/// Sample moment of IR compared with n!.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentCheck {
    pub n: u32,
    pub sample_mean: f64,
    pub expected: f64,
    pub stderr: f64,
    pub z: f64,
}

/// Comparison of the simulated product IR with the standard exponential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub entry: String,
    pub i_source: &'static str,
    pub n_samples: usize,
    pub moments: Vec<MomentCheck>,
    /// Kolmogorov–Smirnov distance to Exp(1); informational.
    pub ks_statistic: f64,
    /// |z| < [`FACTORIZATION_Z`] for every moment.
    pub passed: bool,
}

/// z-score threshold of [`factorization_test`].
pub const FACTORIZATION_Z: f64 = 4.0;
const R_STREAM_OFFSET: u64 = 1 << 62;

/// Multiplies samples of I (simulated, or drawn from its law when the entry
/// cannot be simulated) by independent draws of R from its known law and
/// compares the moments n = 1..4 of the product with n!.
pub fn factorization_test(entry: &CatalogEntry, cfg: &McConfig) -> Result<FactorizationReport> {
    cfg.validate()?;
    let law_r = entry
        .law_r()
        .ok_or_else(|| Error::Unsupported(format!("no known law of R for {}", entry.id())))?;
    let (i_samples, source) = match SubordinatorModel::for_entry(entry) {
        Ok(model) => {
            let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(entry.function(), cfg.dl));
            (simulate_perpetuities(&model, cfg.dl, horizon, cfg.n_samples, cfg.seed), "simulated")
        }
        Err(Error::Unsupported(_)) => {
            let law_i = entry
                .law_i()
                .ok_or_else(|| Error::Unsupported(format!("{} can neither be simulated nor sampled", entry.id())))?;
            let xs = in_pool(|| {
                (0..cfg.n_samples)
                    .into_par_iter()
                    .map(|i| law_i.sample(&mut stream_rng(cfg.seed, i as u64)))
                    .collect()
            });
            (xs, "known_law")
        }
        Err(e) => return Err(e),
    };
    let products: Vec<f64> = in_pool(|| {
        i_samples
            .par_iter()
            .enumerate()
            .map(|(i, x)| x * law_r.sample(&mut stream_rng(cfg.seed, R_STREAM_OFFSET + i as u64)))
            .collect()
    });
    let moments: Vec<MomentCheck> = (1..=4u32)
        .map(|n| {
            let pw: Vec<f64> = products.iter().map(|x| x.powi(n as i32)).collect();
            let (mean, se) = mean_and_stderr(&pw);
            let expected = (1..=n).map(f64::from).product::<f64>();
            MomentCheck { n, sample_mean: mean, expected, stderr: se, z: (mean - expected) / se }
        })
        .collect();
    let passed = moments.iter().all(|m| m.z.abs() < FACTORIZATION_Z);
    Ok(FactorizationReport {
        entry: entry.id(),
        i_source: source,
        n_samples: cfg.n_samples,
        ks_statistic: ks_exponential(&products),
        moments,
        passed,
    })
}

/// One-sample Kolmogorov–Smirnov distance to the standard exponential.
pub fn ks_exponential(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = -(-x.max(0.0)).exp_m1();
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}

/// Fresh generator for a given seed and stream, as used by the simulators.
pub fn rng_for(seed: u64, stream: u64) -> impl Rng {
    stream_rng(seed, stream)
}
