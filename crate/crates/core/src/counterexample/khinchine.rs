//! Monte-Carlo Khinchine ratios `E|Σ ε_k a_k|^r / (Σ a_k²)^{r/2}`.

use statrs::function::gamma::gamma;

use crate::error::{LabError, Result};
use crate::parallel;
use crate::stats::{bootstrap_mean, mean, rademacher, stream_rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KhinchineEstimate {
    pub ratio: f64,
    /// Half-width of the 95% bootstrap interval.
    pub ci: f64,
    /// Bootstrap standard deviation of `ratio`.
    pub sigma: f64,
}

pub const MIN_TRIALS: usize = 100;

/// Estimate the Khinchine ratio from `trials` seeded sign vectors.
pub fn khinchine_ratio(a: &[f64], r: f64, trials: usize, seed: u64) -> Result<KhinchineEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(LabError::Domain(format!("exponent r = {r} must be positive")));
    }
    let norm2: f64 = a.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(LabError::Domain("coefficient sequence is zero".into()));
    }
    if trials < MIN_TRIALS {
        return Err(LabError::Domain(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    let denom = norm2.powf(r / 2.0);
    let samples = parallel::map_indexed(trials, |t| {
        let eps = rademacher(&mut stream_rng(seed, t as u64), a.len());
        let s: f64 = eps.iter().zip(a).map(|(&e, &x)| e as f64 * x).sum();
        s.abs().powf(r) / denom
    });
    let boot = bootstrap_mean(&samples, 1000, seed);
    Ok(KhinchineEstimate { ratio: mean(&samples), ci: boot.half_width, sigma: boot.sigma })
}

/// Best constants `(A_r, B_r)` with `A_r ≤ E|Σ ε_k a_k|^r / (Σ a_k²)^{r/2} ≤ B_r`, for `0 < r < 2`.
pub fn khinchine_envelope(r: f64) -> (f64, f64) {
    // Haagerup: below the crossover exponent the extremal case is two equal coefficients.
    const CROSSOVER: f64 = 1.847;
    let lower = if r <= CROSSOVER {
        2f64.powf(r / 2.0 - 1.0)
    } else {
        // Gaussian moment E|g|^r.
        2f64.powf(r / 2.0) * gamma((r + 1.0) / 2.0) / std::f64::consts::PI.sqrt()
    };
    (lower, 1.0)
}
