//! L²-normalized wave packets stored as sparse spectra on their frequency interval.

use num_complex::Complex64;

use super::tiles::DyadicTime;
use crate::error::{LabError, Result};
use crate::grid::{inverse_transform, phase, Grid, SampledFunction, Spectrum};

/// Half-width of the profile support in units of `|ω|`: `9/10` of the interval.
pub const PROFILE_HALF_WIDTH: f64 = 0.45;
/// Frequency samples required across `ω`.
pub const MIN_BAND_SAMPLES: f64 = 16.0;

/// Steepness `a` of the default profile.
pub const PROFILE_STEEPNESS: f64 = 2.0;

/// Default profile `exp(a − a/(1 − (u/0.45)²))`.
pub fn packet_profile(u: f64) -> f64 {
    let y = u / PROFILE_HALF_WIDTH;
    let q = 1.0 - y * y;
    if q <= 0.0 {
        0.0
    } else {
        (PROFILE_STEEPNESS - PROFILE_STEEPNESS / q).exp()
    }
}

/// Spectrum values on consecutive frequency indices `start, start + 1, …` (`ξ = k/L`).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpectrum {
    pub start: i64,
    pub values: Vec<Complex64>,
}

impl SparseSpectrum {
    /// `⟨f, Φ⟩ = (1/L) Σ f̂ conj(Φ̂)`.
    pub fn inner(&self, f: &Spectrum) -> Complex64 {
        let acc: Complex64 =
            self.values.iter().enumerate().map(|(i, v)| f.at_index(self.start + i as i64) * v.conj()).sum();
        acc / f.grid().period()
    }

    /// `∫ f Φ = (1/L) Σ Φ̂(ξ) f̂(−ξ)`.
    pub fn pairing(&self, f: &Spectrum) -> Complex64 {
        let acc: Complex64 =
            self.values.iter().enumerate().map(|(i, v)| f.at_index(-(self.start + i as i64)) * v).sum();
        acc / f.grid().period()
    }

    /// `target += c · Φ̂` on the full coefficient array.
    pub fn accumulate(&self, c: Complex64, grid: &Grid, target: &mut [Complex64]) {
        for (i, v) in self.values.iter().enumerate() {
            let slot = grid.slot_of(self.start + i as i64).expect("packet inside the grid band");
            target[slot] += c * v;
        }
    }

    pub fn energy(&self, grid: &Grid) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / grid.period()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    pub interval: DyadicTime,
    pub omega: (f64, f64),
    pub spectrum: SparseSpectrum,
    grid: Grid,
}

impl WavePacket {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn full_spectrum(&self) -> Spectrum {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        self.spectrum.accumulate(Complex64::new(1.0, 0.0), &self.grid, &mut coeffs);
        Spectrum::new(self.grid, coeffs).expect("finite packet spectrum")
    }

    pub fn samples(&self) -> SampledFunction {
        inverse_transform(&self.full_spectrum())
    }

    /// Fraction of spectral energy outside `λω`.
    pub fn energy_outside(&self, lambda: f64) -> f64 {
        let (lo, hi) = self.omega;
        let (c, half) = (0.5 * (lo + hi), 0.5 * lambda * (hi - lo));
        let l = self.grid.period();
        let total: f64 = self.spectrum.values.iter().map(|v| v.norm_sqr()).sum();
        let outside: f64 = self
            .spectrum
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| ((self.spectrum.start + *i as i64) as f64 / l - c).abs() > half)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        outside / total
    }
}

/// Packet with Fourier transform `e^{−2πi a ξ} ψ((ξ − c_ω)/|ω|)`, `a = 2^{−l} m`, normalized in `L²`.
pub fn make_wave_packet(
    interval: DyadicTime,
    omega: (f64, f64),
    profile: fn(f64) -> f64,
    grid: &Grid,
) -> Result<WavePacket> {
    let (lo, hi) = omega;
    if !(lo < hi) {
        return Err(LabError::Domain(format!("frequency interval [{lo}, {hi}] is empty")));
    }
    for u in [0.46, 0.48, 0.5] {
        if profile(u) != 0.0 || profile(-u) != 0.0 {
            return Err(LabError::Domain("packet profile must vanish outside 9/10 of the unit interval".into()));
        }
    }
    grid.check_bandwidth(lo.abs().max(hi.abs()))?;
    let l = grid.period();
    let width = hi - lo;
    if width * l < MIN_BAND_SAMPLES {
        return Err(LabError::InvalidGrid(format!(
            "frequency interval of width {width} needs period >= {}",
            MIN_BAND_SAMPLES / width
        )));
    }
    let a = interval.lo();
    let c = 0.5 * (lo + hi);
    let start = (lo * l).ceil() as i64;
    let end = (hi * l).floor() as i64;
    let mut values: Vec<Complex64> = (start..=end)
        .map(|k| {
            let xi = k as f64 / l;
            phase(-a * xi) * profile((xi - c) / width)
        })
        .collect();
    let norm = (values.iter().map(|v| v.norm_sqr()).sum::<f64>() / l).sqrt();
    if !(norm > 0.0) {
        return Err(LabError::Domain("packet profile vanishes on the grid".into()));
    }
    for v in &mut values {
        *v /= norm;
    }
    Ok(WavePacket { interval, omega, spectrum: SparseSpectrum { start, values }, grid: *grid })
}
