//! Random modulated families `F`, `G_{N,k}` and the interval system `I_N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bumps::BumpPair;
use crate::error::{LabError, Result};
use crate::grid::{inverse_transform, phase, Grid, SampledFunction, Spectrum};
use crate::multiplier::{apply_to_spectra, Symbol};

/// Modulation frequency `2(k + 2 ε_k N)` of `G_{N,k}`.
pub fn modulation(k: usize, eps: i8, n: usize) -> i64 {
    2 * (k as i64 + 2 * eps as i64 * n as i64)
}

/// Largest frequency carried by a family of size `n`.
pub fn family_bandwidth(n: usize) -> f64 {
    6.0 * n as f64 + 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomFamily {
    pub n: usize,
    pub eps: Vec<i8>,
    pub f: SampledFunction,
    pub g: Vec<SampledFunction>,
    pub f_spectrum: Spectrum,
    pub g_spectra: Vec<Spectrum>,
}

/// Spectrum of `Φ(x − 1/2) e^{2πi ν x}`, i.e. `Φ̂(ξ − ν) e^{−πi(ξ − ν)}`.
fn shifted_spectrum(bumps: &BumpPair, nu: f64) -> Result<Spectrum> {
    let grid = *bumps.grid();
    Spectrum::from_fn(grid, |xi| {
        let s = xi - nu;
        let v = bumps.phi_hat(s);
        if v == 0.0 {
            Complex64::default()
        } else {
            v * phase(-0.5 * s)
        }
    })
}

/// `F = Φ¹(· − 1/2)` and `G_k = Φ²(· − 1/2) e^{4πi(k + 2ε_k N)·}`, `k = 1..N`.
pub fn make_family(bumps: &BumpPair, n: usize, eps: &[i8]) -> Result<RandomFamily> {
    if n == 0 || eps.len() != n {
        return Err(LabError::Domain(format!("need N >= 1 and N signs, got N = {n}, {} signs", eps.len())));
    }
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(LabError::Domain("signs must be +1 or -1".into()));
    }
    let grid = *bumps.grid();
    grid.check_bandwidth(family_bandwidth(n))?;
    if (grid.period() * 2.0).fract() != 0.0 {
        return Err(LabError::InvalidGrid("period must be a multiple of 1/2".into()));
    }
    let f_spectrum = shifted_spectrum(bumps, 0.0)?;
    let g_spectra: Vec<Spectrum> = (1..=n)
        .map(|k| shifted_spectrum(bumps, modulation(k, eps[k - 1], n) as f64))
        .collect::<Result<_>>()?;
    Ok(RandomFamily {
        n,
        eps: eps.to_vec(),
        f: inverse_transform(&f_spectrum),
        g: g_spectra.iter().map(inverse_transform).collect(),
        f_spectrum,
        g_spectra,
    })
}

impl RandomFamily {
    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }

    pub fn modulation(&self, k: usize) -> i64 {
        modulation(k, self.eps[k - 1], self.n)
    }

    /// `BHT(F, G_k)` through the spectral engine.
    pub fn bht(&self, k: usize) -> Result<SampledFunction> {
        self.check_index(k)?;
        apply_to_spectra(&Symbol::sign(), &self.f_spectrum, &self.g_spectra[k - 1])
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n {
            return Err(LabError::Domain(format!("k = {k} outside 1..={}", self.n)));
        }
        Ok(())
    }
}

/// `Ω_k(x) = −ε_k e^{−4πi(k + 2ε_k N)x} BHT(F, G_k)(x)`.
pub fn demodulated_profile(fam: &RandomFamily, k: usize) -> Result<SampledFunction> {
    let bht = fam.bht(k)?;
    let grid = *fam.grid();
    let nu = fam.modulation(k) as f64;
    let sign = -(fam.eps[k - 1] as f64);
    let values = bht
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * phase(-nu * grid.point(j)) * sign)
        .collect();
    SampledFunction::new(grid, values)
}

/// The `2N` intervals `I^ℓ_N = [1/2 + ℓ/(8N) − 1/(64N), 1/2 + ℓ/(8N) + 1/(64N)]`, `0 < |ℓ| ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSystem {
    pub n: usize,
    /// `(ℓ, lo, hi)` in increasing order.
    pub intervals: Vec<(i64, f64, f64)>,
}

impl IntervalSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(LabError::Domain("N must be positive".into()));
        }
        let nf = n as f64;
        let intervals = (-(n as i64)..=n as i64)
            .filter(|&l| l != 0)
            .map(|l| {
                let c = 0.5 + l as f64 / (8.0 * nf);
                (l, c - 1.0 / (64.0 * nf), c + 1.0 / (64.0 * nf))
            })
            .collect();
        Ok(Self { n, intervals })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(_, lo, hi)| x >= lo && x <= hi)
    }

    pub fn total_measure(&self) -> f64 {
        self.intervals.iter().map(|&(_, lo, hi)| hi - lo).sum()
    }

    /// Grid indices whose sample point lies in `I_N`.
    pub fn grid_indices(&self, grid: &Grid) -> Vec<usize> {
        (0..grid.len()).filter(|&j| self.contains(grid.point(j))).collect()
    }

    /// Midpoint rule with `per` nodes on every interval: `(x, weight)`.
    pub fn midpoint_nodes(&self, per: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(per * self.intervals.len());
        for &(_, lo, hi) in &self.intervals {
            let w = (hi - lo) / per as f64;
            for i in 0..per {
                out.push((lo + (i as f64 + 0.5) * w, w));
            }
        }
        out
    }

    /// `min |cos(8Nπx)|` over `per` equispaced points of every interval, endpoints included.
    pub fn min_cos_factor(&self, per: usize) -> f64 {
        let nf = self.n as f64;
        let mut min = f64::INFINITY;
        for &(_, lo, hi) in &self.intervals {
            for i in 0..=per {
                let x = lo + (hi - lo) * i as f64 / per as f64;
                min = min.min((8.0 * nf * PI * x).cos().abs());
            }
        }
        min
    }
}
