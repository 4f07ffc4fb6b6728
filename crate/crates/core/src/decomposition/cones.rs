//! The cones `C_n` inside `A = {ξ2 > |ξ1|}` and their borderlines `L_n`.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{LabError, Result};
use crate::multiplier::dist_to_diagonal;

/// `dist(ξ, Γ) / |ξ|`.
pub fn singularity_ratio(xi1: f64, xi2: f64) -> f64 {
    dist_to_diagonal(xi1, xi2) / xi1.hypot(xi2)
}

/// Closed ratio band `[lo, hi]` of `C_n`.
pub fn band(n: u32) -> (f64, f64) {
    match n {
        0 => panic!("cone indices start at 1"),
        1 => (3f64.sqrt() / 2.0, 1.0),
        2 => (0.5, 3f64.sqrt() / 2.0),
        _ => (1.0 / ((n + 2) as f64).sqrt(), 1.0 / ((n + 1) as f64).sqrt()),
    }
}

/// Polar angles `[θ_lo, θ_hi]` of `C_n`; `θ_lo` is the direction of `L_n`.
pub fn angle_band(n: u32) -> (f64, f64) {
    let (lo, hi) = band(n);
    (FRAC_PI_4 + lo.asin(), FRAC_PI_4 + hi.asin())
}

/// Index of the cone containing `ξ`, `None` outside `A`; ties go to the smaller index.
pub fn cone_index(xi1: f64, xi2: f64) -> Result<Option<u32>> {
    if xi1 == 0.0 && xi2 == 0.0 {
        return Err(LabError::Domain("the origin has no cone".into()));
    }
    if !(xi2 > xi1.abs()) {
        return Ok(None);
    }
    let rho = singularity_ratio(xi1, xi2);
    if rho >= 3f64.sqrt() / 2.0 {
        return Ok(Some(1));
    }
    if rho >= 0.5 {
        return Ok(Some(2));
    }
    // Smallest n >= 3 with rho >= 1/sqrt(n+2).
    let mut n = ((1.0 / (rho * rho)) - 2.0).ceil().max(3.0) as u32;
    while n > 3 && rho >= band(n - 1).0 {
        n -= 1;
    }
    while rho < band(n).0 {
        n += 1;
    }
    Ok(Some(n))
}

/// Slope of the borderline `L_n`.
pub fn borderline(n: u32) -> f64 {
    match n {
        0 => panic!("cone indices start at 1"),
        1 => (7.0 * PI / 12.0).tan(),
        2 => (5.0 * PI / 12.0).tan(),
        _ => (FRAC_PI_4 + (1.0 / ((n + 2) as f64).sqrt()).asin()).tan(),
    }
}

/// `1/√(n+1) − 1/√(n+2)`, the relative width driving the Whitney proportionality.
pub fn whitney_width(n: u32) -> f64 {
    1.0 / ((n + 1) as f64).sqrt() - 1.0 / ((n + 2) as f64).sqrt()
}
