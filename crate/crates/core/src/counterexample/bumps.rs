//! The bump pair `Φ¹, Φ²`: `L¹`-normalized, even, with nonnegative spectra supported in `[−1/2, 1/2]`.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::grid::{inverse_transform, lp_quasinorm, Grid, SampledFunction, Spectrum, Window};

/// Default period used by the counterexample experiments.
pub const DEFAULT_PERIOD: f64 = 64.0;

/// `exp(−1/(1/4 − ξ²))` on `|ξ| < 1/2`, zero elsewhere.
pub fn profile(xi: f64) -> f64 {
    let d = 0.25 - xi * xi;
    if d > 0.0 {
        (-1.0 / d).exp()
    } else {
        0.0
    }
}

/// Both bumps of the pair share one profile, so one function and its scale suffice.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpPair {
    pub phi1: SampledFunction,
    pub phi2: SampledFunction,
    pub spectrum1: Spectrum,
    pub spectrum2: Spectrum,
    /// `c` with `Φ̂^j = c · profile`.
    pub scale: f64,
}

/// Measured invariants of a [`BumpPair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpInvariants {
    pub l1_error: f64,
    pub min_spectrum: f64,
    pub energy_outside: f64,
    pub asymmetry: f64,
    pub min_value: f64,
}

impl BumpInvariants {
    pub fn holds(&self) -> bool {
        self.l1_error <= 1e-8
            && self.min_spectrum >= -1e-12
            && self.energy_outside < 1e-12
            && self.asymmetry <= 1e-10
    }
}

/// Build the pair on `grid`; the half-open frequency window `[−1/2, 1/2]` needs 64 samples.
pub fn make_bump_pair(grid: Grid) -> Result<BumpPair> {
    let inside = (0..grid.len()).filter(|&i| grid.frequency(i).abs() <= 0.5).count();
    if inside < 64 {
        return Err(LabError::InvalidGrid(format!(
            "only {inside} frequency samples in [-1/2, 1/2]; need 64 (period >= 64)"
        )));
    }
    let unit = Spectrum::from_fn(grid, |xi| Complex64::new(profile(xi), 0.0))?;
    let phi = inverse_transform(&unit);
    let mass = lp_quasinorm(&phi, 1.0, Window::Full)?;
    let scale = 1.0 / mass;
    let spectrum = Spectrum::from_fn(grid, |xi| Complex64::new(scale * profile(xi), 0.0))?;
    let phi = inverse_transform(&spectrum);
    Ok(BumpPair {
        phi1: phi.clone(),
        phi2: phi,
        spectrum1: spectrum.clone(),
        spectrum2: spectrum,
        scale,
    })
}

impl BumpPair {
    pub fn grid(&self) -> &Grid {
        self.phi1.grid()
    }

    /// `Φ̂^j(ξ)` from the closed-form profile.
    pub fn phi_hat(&self, xi: f64) -> f64 {
        self.scale * profile(xi)
    }

    /// `Φ¹(x)` at an arbitrary point by trigonometric interpolation.
    pub fn phi1_at(&self, x: f64) -> f64 {
        self.spectrum1.evaluate(x).re
    }

    pub fn phi2_at(&self, x: f64) -> f64 {
        self.spectrum2.evaluate(x).re
    }

    /// `Ω(x) = Φ¹(x − 1/2) Φ²(x − 1/2)`.
    pub fn omega(&self, x: f64) -> f64 {
        self.phi1_at(x - 0.5) * self.phi2_at(x - 0.5)
    }

    /// The same pair on another grid of the same period.
    pub fn regrid(&self, samples: usize) -> Result<BumpPair> {
        make_bump_pair(Grid::new(samples, self.grid().period(), self.grid().x0())?)
    }

    pub fn invariants(&self) -> Result<BumpInvariants> {
        let grid = *self.grid();
        let mut l1_error: f64 = 0.0;
        let mut min_spectrum = f64::INFINITY;
        let mut energy_outside: f64 = 0.0;
        let mut asymmetry: f64 = 0.0;
        let mut min_value = f64::INFINITY;
        for (phi, spec) in [(&self.phi1, &self.spectrum1), (&self.phi2, &self.spectrum2)] {
            l1_error = l1_error.max((lp_quasinorm(phi, 1.0, Window::Full)? - 1.0).abs());
            let total: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
            let mut out = 0.0;
            for (i, c) in spec.coeffs().iter().enumerate() {
                min_spectrum = min_spectrum.min(c.re);
                if grid.frequency(i).abs() > 0.5 {
                    out += c.norm_sqr();
                }
            }
            energy_outside = energy_outside.max(out / total);
            let peak = phi.sup_norm();
            let v = phi.values();
            let m = v.len();
            for j in 0..m {
                let x = grid.point(j);
                asymmetry = asymmetry.max(v[j].im.abs() / peak);
                min_value = min_value.min(v[j].re);
                // Mirror only points whose reflection is also a sample.
                let r = (-x - grid.x0()) / grid.spacing();
                let jr = r.round();
                if (r - jr).abs() < 1e-9 && jr >= 0.0 && (jr as usize) < m {
                    asymmetry = asymmetry.max((v[j].re - v[jr as usize].re).abs() / peak);
                }
            }
        }
        Ok(BumpInvariants { l1_error, min_spectrum, energy_outside, asymmetry, min_value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::flp_norm;

    fn pair() -> BumpPair {
        make_bump_pair(Grid::centered(1024, DEFAULT_PERIOD, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn invariants_hold() {
        let inv = pair().invariants().unwrap();
        assert!(inv.holds(), "{inv:?}");
    }

    #[test]
    fn value_at_origin_is_spectral_mass() {
        let p = pair();
        let g = p.grid();
        let mass: f64 = p.spectrum1.coeffs().iter().map(|c| c.re).sum::<f64>() / g.period();
        let j = g.len() / 2;
        assert!(g.point(j).abs() < 1e-15);
        assert!((p.phi1.values()[j].re - mass).abs() < 1e-12);
        assert!(mass > 0.0);
        assert!((p.phi1_at(0.0) - mass).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(make_bump_pair(Grid::centered(1024, 32.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn flp_matches_direct_sum() {
        let p = pair();
        let direct = (p.spectrum2.coeffs().iter().map(|c| c.norm().powi(4)).sum::<f64>()
            / p.grid().period())
        .powf(0.25);
        assert!((flp_norm(&p.phi2, 4.0).unwrap() - direct).abs() < 1e-12 * direct);
    }
}
