//! Scaling experiments for the counterexample and the resulting verdict.

use std::fmt;

use num_complex::Complex64;

use super::bumps::BumpPair;
use super::family::{demodulated_profile, family_bandwidth, make_family, modulation, IntervalSystem};
use crate::error::{LabError, Result};
use crate::grid::{phase, Grid, Spectrum};
use crate::parallel;
use crate::report::{ScalingReport, ScalingRow};
use crate::stats::{bootstrap_loglog_slope, mean, rademacher, std_error, stream_rng, BootstrapInterval};

/// Quadrature nodes per interval `I^ℓ_N` in the fast path.
pub const NODES_PER_INTERVAL: usize = 16;
/// Bootstrap resamples for slope intervals.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Largest relative gap tolerated between the fast path and the full engine.
pub const GUARD_TOLERANCE: f64 = 1e-6;

/// Stream key of trial `t` for family size `n`.
fn trial_stream(n: usize, t: usize) -> u64 {
    ((n as u64) << 32) | t as u64
}

/// Rademacher signs of trial `t` at family size `n`.
pub fn trial_signs(seed: u64, n: usize, t: usize) -> Vec<i8> {
    rademacher(&mut stream_rng(seed, trial_stream(n, t)), n)
}

/// Per-trial values of `‖Σ_k BHT(F, G_{N,k})‖^{r0}_{L^{r0}(I_N)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSamples {
    pub n_list: Vec<usize>,
    pub samples: Vec<Vec<f64>>,
    pub slope_interval: BootstrapInterval,
    /// Relative sup gap between fast path and full engine at the smallest `N`.
    pub guard_gap: Option<f64>,
    pub report: ScalingReport,
}

/// Fast evaluator of `S(x) = Σ_k ε_k Ω(x) e^{4πi(k + 2ε_k N)x}` at fixed nodes.
pub struct FastPath {
    n: usize,
    nodes: Vec<(f64, f64)>,
    omega: Vec<f64>,
    /// `e^{4πikx}` for `k = 1..N`, row per node.
    powers: Vec<Complex64>,
    beat: Vec<Complex64>,
}

impl FastPath {
    pub fn new(bumps: &BumpPair, nodes: Vec<(f64, f64)>, n: usize) -> Self {
        let omega = nodes.iter().map(|&(x, _)| bumps.omega(x)).collect();
        let mut powers = Vec::with_capacity(nodes.len() * n);
        for &(x, _) in &nodes {
            let z = phase(2.0 * x);
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                p *= z;
                powers.push(p);
            }
        }
        let beat = nodes.iter().map(|&(x, _)| phase(4.0 * n as f64 * x)).collect();
        Self { n, nodes, omega, powers, beat }
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// `S` at every node.
    pub fn values(&self, eps: &[i8]) -> Vec<Complex64> {
        (0..self.nodes.len())
            .map(|i| {
                let row = &self.powers[i * self.n..(i + 1) * self.n];
                let mut plus = Complex64::default();
                let mut minus = Complex64::default();
                for (p, &e) in row.iter().zip(eps) {
                    if e > 0 {
                        plus += p;
                    } else {
                        minus += p;
                    }
                }
                let b = self.beat[i];
                self.omega[i] * (b * plus - b.conj() * minus)
            })
            .collect()
    }

    /// `Σ_i w_i |S(x_i)|^r`.
    pub fn lr_power(&self, eps: &[i8], r: f64) -> f64 {
        self.values(eps)
            .iter()
            .zip(&self.nodes)
            .map(|(s, &(_, w))| w * s.norm().powf(r))
            .sum()
    }
}

/// Compare the fast path with the full spectral engine for one sign draw at size `n`.
///
/// Returns the sup of the gap over grid points in `I_N`, relative to the sup of `|S|`.
pub fn guard_gap(bumps: &BumpPair, n: usize, eps: &[i8]) -> Result<f64> {
    let mut b = bumps.clone();
    let needed = Grid::required_samples(b.grid().period(), family_bandwidth(n));
    if needed > b.grid().len() {
        b = b.regrid(needed)?;
    }
    let fam = make_family(&b, n, eps)?;
    let grid = *fam.grid();
    let system = IntervalSystem::new(n)?;
    let idx = system.grid_indices(&grid);
    if idx.is_empty() {
        return Err(LabError::Domain(format!("grid has no samples in I_{n}")));
    }
    let mut slow = vec![Complex64::default(); idx.len()];
    for k in 1..=n {
        let term = fam.bht(k)?;
        for (s, &j) in slow.iter_mut().zip(&idx) {
            *s += term.values()[j];
        }
    }
    let nodes: Vec<(f64, f64)> = idx.iter().map(|&j| (grid.point(j), 0.0)).collect();
    let fast = FastPath::new(&b, nodes, n).values(eps);
    let scale = fast.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // The sum of BHT terms equals −S.
    let gap = slow.iter().zip(&fast).map(|(s, f)| (s + f).norm()).fold(0.0, f64::max);
    Ok(gap / scale)
}

/// Sup gap between the demodulated engine output and the product `Ω` on `I_N`,
/// together with the largest spread across `k` and signs.
pub fn factorization_gaps(bumps: &BumpPair, n: usize, eps: &[i8]) -> Result<(f64, f64)> {
    let fam = make_family(bumps, n, eps)?;
    let grid = *fam.grid();
    let idx = IntervalSystem::new(n)?.grid_indices(&grid);
    let oracle: Vec<f64> = idx.iter().map(|&j| bumps.omega(grid.point(j))).collect();
    let mut to_product: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let mut first: Option<Vec<Complex64>> = None;
    for k in 1..=n {
        let om = demodulated_profile(&fam, k)?;
        let vals: Vec<Complex64> = idx.iter().map(|&j| om.values()[j]).collect();
        for (v, o) in vals.iter().zip(&oracle) {
            to_product = to_product.max((v - o).norm());
        }
        match &first {
            None => first = Some(vals),
            Some(f) => {
                for (a, b) in vals.iter().zip(f) {
                    spread = spread.max((a - b).norm());
                }
            }
        }
    }
    Ok((to_product, spread))
}

/// Run the expectation experiment and keep the per-trial samples.
pub fn expectation_samples(
    bumps: &BumpPair,
    r0: f64,
    n_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExpectationSamples> {
    if !(0.5..2.0).contains(&r0) {
        return Err(LabError::Domain(format!("r0 = {r0} outside [1/2, 2)")));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(LabError::Domain("N list must be nonempty and positive".into()));
    }
    if trials == 0 {
        return Err(LabError::Domain("need at least one trial".into()));
    }
    let n_min = *n_list.iter().min().unwrap();
    let gap = guard_gap(bumps, n_min, &trial_signs(seed, n_min, 0))?;
    if !(gap <= GUARD_TOLERANCE) {
        return Err(LabError::Domain(format!(
            "fast path deviates from the spectral engine by {gap:e} at N = {n_min}"
        )));
    }
    let mut samples = Vec::with_capacity(n_list.len());
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let system = IntervalSystem::new(n)?;
        let fast = FastPath::new(bumps, system.midpoint_nodes(NODES_PER_INTERVAL), n);
        let vals = parallel::map_indexed(trials, |t| fast.lr_power(&trial_signs(seed, n, t), r0));
        rows.push(ScalingRow { parameter: n as f64, value: mean(&vals), stderr: std_error(&vals) });
        samples.push(vals);
    }
    let params: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let slope_interval = bootstrap_loglog_slope(&params, &samples, BOOTSTRAP_RESAMPLES, seed);
    let report = ScalingReport::fit(rows, slope_interval.half_width, seed)?;
    Ok(ExpectationSamples {
        n_list: n_list.to_vec(),
        samples,
        slope_interval,
        guard_gap: Some(gap),
        report,
    })
}

/// `E ‖Σ_k BHT(F, G_{N,k})‖^{r0}_{L^{r0}(I_N)}` against `N`.
pub fn expectation_experiment(
    bumps: &BumpPair,
    r0: f64,
    n_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ScalingReport> {
    Ok(expectation_samples(bumps, r0, n_list, trials, seed)?.report)
}

/// Spectrum of `G_N = Σ_k G_{N,k}` on a grid of the bumps' period wide enough for `N = |eps|`.
pub fn sum_spectrum(bumps: &BumpPair, eps: &[i8]) -> Result<Spectrum> {
    let n = eps.len();
    let l = bumps.grid().period();
    if (l * 2.0).fract() != 0.0 {
        return Err(LabError::InvalidGrid("period must be a multiple of 1/2".into()));
    }
    let samples = Grid::required_samples(l, family_bandwidth(n)).max(bumps.grid().len());
    let grid = Grid::new(samples, l, bumps.grid().x0())?;
    let mut coeffs = vec![Complex64::default(); samples];
    let half = (0.5 * l).ceil() as i64;
    for (k, &e) in eps.iter().enumerate() {
        let nu = modulation(k + 1, e, n);
        let centre = (nu as f64 * l).round() as i64;
        for q in centre - half..=centre + half {
            let s = q as f64 / l - nu as f64;
            let v = bumps.phi_hat(s);
            if v != 0.0 {
                let slot = grid.slot_of(q).ok_or_else(|| LabError::InvalidGrid("translate leaves the grid".into()))?;
                coeffs[slot] += v * phase(-0.5 * s);
            }
        }
    }
    Spectrum::new(grid, coeffs)
}

/// `‖Ĝ_N‖_{L^{q'}}` with frequency weight `1/L`; `q' = ∞` gives the sup norm.
pub fn fl_norm_of_sum(bumps: &BumpPair, eps: &[i8], q_dual: f64) -> Result<f64> {
    let spec = sum_spectrum(bumps, eps)?;
    Ok(if q_dual.is_infinite() {
        spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    } else {
        spec.lq_norm(q_dual)
    })
}

/// `‖Ĝ_N‖_{L^{q0'}}` against `N` for one sampled sign vector per `N`.
///
/// The counterexample concerns `q0 ∈ [1, 2)`; larger `q0` is accepted to probe the allowed regime.
pub fn fl_norm_experiment(bumps: &BumpPair, q0: f64, n_list: &[usize], seed: u64) -> Result<ScalingReport> {
    if !(q0 >= 1.0 && q0.is_finite()) {
        return Err(LabError::Domain(format!("q0 = {q0} must be at least 1")));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(LabError::Domain("N list must be nonempty and positive".into()));
    }
    let q_dual = dual_exponent(q0);
    let rows = n_list
        .iter()
        .map(|&n| {
            let eps = trial_signs(seed, n, 0);
            Ok(ScalingRow { parameter: n as f64, value: fl_norm_of_sum(bumps, &eps, q_dual)?, stderr: 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let ci = if rows.len() > 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.parameter).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.value).collect();
        1.96 * crate::stats::loglog_fit(&xs, &ys)?.slope_stderr
    } else {
        0.0
    };
    ScalingReport::fit(rows, ci, seed)
}

/// `q' = q/(q − 1)`.
pub fn dual_exponent(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else {
        q / (q - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Unbounded,
    NoContradiction,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unbounded => "unbounded",
            Verdict::NoContradiction => "no contradiction",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Measured exponents of the two sides of the contradiction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContradictionSummary {
    pub lower: f64,
    pub upper: f64,
    pub target_lower: f64,
    pub target_upper: f64,
    pub joint_ci: f64,
    pub verdict: Verdict,
}

/// The verdict predicted by the exponents alone.
pub fn predicted_verdict(q0: f64) -> Verdict {
    if q0 < 2.0 {
        Verdict::Unbounded
    } else if q0 == 2.0 {
        Verdict::Inconclusive
    } else {
        Verdict::NoContradiction
    }
}

/// Compare the growth `N^{lower}` of the expectation with the growth `N^{upper}`
/// allowed by `‖F‖ ‖Ĝ_N‖^{r0}_{L^{q0'}}`.
pub fn contradiction_summary(
    exp1: &ScalingReport,
    exp2: &ScalingReport,
    r0: f64,
    q0: f64,
) -> Result<ContradictionSummary> {
    if exp1.parameters() != exp2.parameters() {
        return Err(LabError::MismatchedReports);
    }
    let lower = exp1.slope;
    let upper = r0 * exp2.slope;
    let joint_ci = (exp1.slope_ci.powi(2) + (r0 * exp2.slope_ci).powi(2)).sqrt();
    let verdict = if !joint_ci.is_finite() {
        Verdict::Inconclusive
    } else if lower - upper > joint_ci {
        Verdict::Unbounded
    } else if upper - lower > joint_ci {
        Verdict::NoContradiction
    } else {
        Verdict::Inconclusive
    };
    Ok(ContradictionSummary {
        lower,
        upper,
        target_lower: r0 / 2.0,
        target_upper: (1.0 - 1.0 / q0) * r0,
        joint_ci,
        verdict,
    })
}
