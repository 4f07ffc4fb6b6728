//! Least squares, bootstrap intervals and seeded random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};

/// Generator for stream `stream` of experiment `seed`.
///
/// Streams are keyed by index, so draws never depend on execution order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rademacher signs `±1` with equal probability.
pub fn rademacher(rng: &mut impl Rng, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean; zero for a single sample.
pub fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    /// Classical standard error of the slope (zero when fewer than three points).
    pub slope_stderr: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(LabError::Domain("least squares needs at least two paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::Domain("least squares needs distinct abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let slope_stderr = if xs.len() > 2 { (ss / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(LinearFit { slope, intercept, residual: (ss / n).sqrt(), slope_stderr })
}

/// Least squares on `(ln x, ln y)`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.iter().chain(ys).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(LabError::Domain("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    ols(&lx, &ly)
}

/// Bootstrap spread of a statistic computed from resampled trial sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapInterval {
    /// Half-width of the central 95% percentile interval.
    pub half_width: f64,
    /// Standard deviation of the bootstrap distribution.
    pub sigma: f64,
}

impl BootstrapInterval {
    pub fn unbounded() -> Self {
        Self { half_width: f64::INFINITY, sigma: f64::INFINITY }
    }
}

fn percentile_interval(mut stats: Vec<f64>) -> BootstrapInterval {
    stats.retain(|s| s.is_finite());
    if stats.len() < 2 {
        return BootstrapInterval::unbounded();
    }
    stats.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (stats.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        stats[lo] + (pos - lo as f64) * (stats[hi] - stats[lo])
    };
    let m = mean(&stats);
    let sd = (stats.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (stats.len() - 1) as f64).sqrt();
    BootstrapInterval { half_width: 0.5 * (q(0.975) - q(0.025)), sigma: sd }
}

/// Bootstrap interval for the mean of `samples`; unbounded with fewer than two samples.
pub fn bootstrap_mean(samples: &[f64], resamples: usize, seed: u64) -> BootstrapInterval {
    if samples.len() < 2 {
        return BootstrapInterval::unbounded();
    }
    let mut rng = stream_rng(seed, u64::MAX);
    let n = samples.len();
    let stats = (0..resamples)
        .map(|_| (0..n).map(|_| samples[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    percentile_interval(stats)
}

/// Bootstrap interval for the log-log slope of per-parameter means.
///
/// Each resample redraws the trials of every parameter with replacement.
pub fn bootstrap_loglog_slope(
    params: &[f64],
    samples: &[Vec<f64>],
    resamples: usize,
    seed: u64,
) -> BootstrapInterval {
    if samples.iter().any(|s| s.len() < 2) || params.len() != samples.len() {
        return BootstrapInterval::unbounded();
    }
    let mut rng = stream_rng(seed, u64::MAX - 1);
    let mut stats = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let means: Vec<f64> = samples
            .iter()
            .map(|s| (0..s.len()).map(|_| s[rng.random_range(0..s.len())]).sum::<f64>() / s.len() as f64)
            .collect();
        if let Ok(fit) = loglog_fit(params, &means) {
            stats.push(fit.slope);
        }
    }
    percentile_interval(stats)
}
