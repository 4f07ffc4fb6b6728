//! Uniform periodic sampling, discrete Fourier analysis and (quasi-)norms.
//!
//! A [`Grid`] samples a period of length `L` at `M` points `x_j = x0 + j h`,
//! `h = L / M`. Spectra are indexed by the frequencies `ξ_m = m / L` with
//! `m ∈ [-M/2, M/2)` and are stored in FFT order (index `i` carries
//! `m = i` for `i < M/2` and `m = i - M` otherwise, so the Nyquist index is
//! assigned to `-M/2`).
//!
//! The continuous transform `f̂(ξ) = ∫ f(x) e^{-2πi ξ x} dx` is approximated by
//! the `h`-weighted Riemann sum, and the inverse by `(1/L) Σ_m f̂(ξ_m) e^{2πi ξ_m x}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    m: usize,
    length: f64,
    x0: f64,
}

impl Grid {
    /// `m` samples over `[x0, x0 + length)`; `m` must be a power of two, at least 8.
    pub fn new(m: usize, length: f64, x0: f64) -> Result<Self> {
        if m < 8 || !m.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "sample count {m} must be a power of two >= 8"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(LabError::InvalidGrid(format!("period {length} must be positive")));
        }
        if !x0.is_finite() {
            return Err(LabError::InvalidGrid("left endpoint must be finite".into()));
        }
        Ok(Self { m, length, x0 })
    }

    /// Grid of period `length` centred on `center`.
    pub fn centered(m: usize, length: f64, center: f64) -> Result<Self> {
        Self::new(m, length, center - 0.5 * length)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        self.length
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.m as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| self.point(j))
    }

    /// Signed frequency index of FFT slot `i`.
    pub fn frequency_index(&self, i: usize) -> i64 {
        let half = self.m / 2;
        if i < half {
            i as i64
        } else {
            i as i64 - self.m as i64
        }
    }

    pub fn frequency(&self, i: usize) -> f64 {
        self.frequency_index(i) as f64 / self.length
    }

    /// FFT slot of signed frequency index `k`, if representable.
    pub fn slot_of(&self, k: i64) -> Option<usize> {
        let half = (self.m / 2) as i64;
        if k < -half || k >= half {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.m as i64) as usize })
    }

    /// Largest representable positive frequency `(M/2 - 1)/L`.
    pub fn nyquist(&self) -> f64 {
        (self.m / 2) as f64 / self.length
    }

    /// Smallest power-of-two sample count for which frequencies up to `fmax`
    /// stay below 90% of the Nyquist frequency at period `length`.
    pub fn required_samples(length: f64, fmax: f64) -> usize {
        let needed = (2.0 * fmax * length / 0.9).ceil().max(8.0) as usize;
        needed.next_power_of_two()
    }

    /// Error unless frequencies up to `fmax` lie below 90% of Nyquist.
    pub fn check_bandwidth(&self, fmax: f64) -> Result<()> {
        if fmax <= 0.9 * self.nyquist() {
            Ok(())
        } else {
            Err(LabError::Bandwidth {
                needed: fmax,
                available: 0.9 * self.nyquist(),
                required_m: Self::required_samples(self.length, fmax),
            })
        }
    }

    fn same_as(&self, other: &Grid) -> bool {
        self.m == other.m && self.length == other.length && self.x0 == other.x0
    }
}

/// Complex samples `f(x0 + j h)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::InvalidGrid(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(LabError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn same_grid(&self, other: &SampledFunction) -> bool {
        self.grid.same_as(&other.grid)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts_unchecked(self.grid, self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(LabError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self::from_parts_unchecked(self.grid, values))
    }

    pub fn pointwise_product(&self, other: &SampledFunction) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(LabError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect();
        Ok(Self::from_parts_unchecked(self.grid, values))
    }

    /// Largest modulus over all samples.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Fourier coefficients `f̂(ξ_m)` in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(LabError::InvalidGrid(format!(
                "{} coefficients for a grid of {}",
                coeffs.len(),
                grid.len()
            )));
        }
        if let Some(index) = coeffs.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(LabError::NonFinite { index });
        }
        Ok(Self { grid, coeffs })
    }

    /// Spectrum with `coeffs[i] = g(ξ_i)`.
    pub fn from_fn(grid: Grid, g: impl Fn(f64) -> Complex64) -> Result<Self> {
        let coeffs = (0..grid.len()).map(|i| g(grid.frequency(i))).collect();
        Self::new(grid, coeffs)
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at signed frequency index `k`.
    pub fn at_index(&self, k: i64) -> Complex64 {
        self.grid
            .slot_of(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    /// `(Σ_m |f̂(ξ_m)|^q / L)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm().powf(q)).sum();
        (sum / self.grid.period()).powf(1.0 / q)
    }

    /// Multiply by `e^{-2πi ξ a}`, i.e. translate the function by `a`.
    pub fn translate(&self, a: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * phase(-self.grid.frequency(i) * a))
            .collect();
        Self::from_parts_unchecked(self.grid, coeffs)
    }

    /// Slots whose coefficient exceeds `rel` times the largest modulus.
    pub fn active_slots(&self, rel: f64) -> Vec<usize> {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Vec::new();
        }
        let cut = rel * max;
        (0..self.coeffs.len())
            .filter(|&i| self.coeffs[i].norm() > cut)
            .collect()
    }

    /// Largest `|ξ|` among active slots.
    pub fn max_active_frequency(&self, rel: f64) -> f64 {
        self.active_slots(rel)
            .into_iter()
            .map(|i| self.grid.frequency(i).abs())
            .fold(0.0, f64::max)
    }

    /// Fraction of spectral energy with `|ξ|` above 90% of Nyquist.
    pub fn top_band_energy_fraction(&self) -> f64 {
        let cut = 0.9 * self.grid.nyquist();
        let mut top = 0.0;
        let mut total = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            if self.grid.frequency(i).abs() > cut {
                top += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            top / total
        }
    }

    /// Trigonometric interpolation `(1/L) Σ_m f̂(ξ_m) e^{2πi ξ_m x}` at an arbitrary point.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let l = self.grid.period();
        let mut acc = Complex64::default();
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != Complex64::default() {
                acc += c * phase(self.grid.frequency(i) * x);
            }
        }
        acc / l
    }
}

/// `e^{2πi t}`.
#[inline]
pub fn phase(t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * t).sin_cos();
    Complex64::new(c, s)
}

type PlanKey = (usize, bool);
type PlanCache = (FftPlanner<f64>, HashMap<PlanKey, Arc<dyn Fft<f64>>>);

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    let cell = PLANS.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cell.lock().expect("fft planner poisoned");
    let (planner, cache) = &mut *guard;
    cache
        .entry((len, forward))
        .or_insert_with(|| {
            if forward {
                planner.plan_fft_forward(len)
            } else {
                planner.plan_fft_inverse(len)
            }
        })
        .clone()
}

/// `coeffs[m] = h Σ_j f(x_j) e^{-2πi ξ_m x_j}`.
pub fn forward_transform(f: &SampledFunction) -> Spectrum {
    let grid = *f.grid();
    let mut buf = f.values().to_vec();
    plan(grid.len(), true).process(&mut buf);
    let h = grid.spacing();
    for (i, c) in buf.iter_mut().enumerate() {
        *c *= h * phase(-grid.frequency(i) * grid.x0());
    }
    Spectrum::from_parts_unchecked(grid, buf)
}

/// `f(x_j) = (1/L) Σ_m coeffs[m] e^{2πi ξ_m x_j}`.
pub fn inverse_transform(s: &Spectrum) -> SampledFunction {
    let grid = *s.grid();
    let mut buf: Vec<Complex64> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * phase(grid.frequency(i) * grid.x0()))
        .collect();
    plan(grid.len(), false).process(&mut buf);
    let scale = 1.0 / grid.period();
    for v in &mut buf {
        *v *= scale;
    }
    SampledFunction::from_parts_unchecked(grid, buf)
}

/// Half-open window `[lo, hi)` of the sampling domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Full,
    Interval(f64, f64),
}

/// `(h Σ_{x_j ∈ window} |f(x_j)|^p)^{1/p}`; a quasi-norm for `p < 1`.
pub fn lp_quasinorm(f: &SampledFunction, p: f64, window: Window) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(LabError::Domain(format!("exponent p = {p} must be positive")));
    }
    let grid = f.grid();
    let h = grid.spacing();
    let sum: f64 = match window {
        Window::Full => f.values().iter().map(|v| v.norm().powf(p)).sum(),
        Window::Interval(lo, hi) => {
            let end = grid.x0() + grid.period();
            let tol = 1e-12 * grid.period();
            if !(lo < hi) {
                return Err(LabError::EmptyWindow { lo, hi });
            }
            if lo < grid.x0() - tol || hi > end + tol {
                return Err(LabError::Domain(format!(
                    "window [{lo}, {hi}) leaves the domain [{}, {end})",
                    grid.x0()
                )));
            }
            let mut count = 0usize;
            let mut acc = 0.0;
            for (j, v) in f.values().iter().enumerate() {
                let x = grid.point(j);
                if x >= lo && x < hi {
                    count += 1;
                    acc += v.norm().powf(p);
                }
            }
            if count == 0 {
                return Err(LabError::EmptyWindow { lo, hi });
            }
            acc
        }
    };
    Ok((h * sum).powf(1.0 / p))
}

/// `‖f̂‖_{L^q}` with frequency weight `1/L`.
pub fn flp_norm(f: &SampledFunction, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(LabError::Domain(format!("exponent q = {q} must be >= 1")));
    }
    Ok(forward_transform(f).lq_norm(q))
}
