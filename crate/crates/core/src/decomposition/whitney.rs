//! Whitney collections `Q_n`: shifted dyadic squares inside the cone band whose
//! size is proportional to their distance from the origin.
//!
//! The admissibility test is invariant under dilation by powers of two, so the
//! collection is generated from scale-free keys `(j1, α1, j2, α2)` read at scale 0;
//! a key's square at scale `k` is its dilate by `2^{−k}`. Slots are the rank of the
//! key in angular order, hence stable across scales.

use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};

use super::cones::{angle_band, whitney_width};
use super::dyadic::{Shift, ShiftedDyadicInterval};
use crate::error::{LabError, Result};

/// The proportionality constant as printed; it is far too small for any enumeration.
pub const LITERAL_WHITNEY_CONSTANT: f64 = 1e-4;
/// Default proportionality constant used by enumerations.
pub const DEFAULT_WHITNEY_CONSTANT: f64 = 1.0;
/// Two-sided tolerance on the proportionality ratio.
pub const RATIO_TOLERANCE: f64 = 4.0;
/// Maximum number of candidate keys scanned for one cone.
pub const CANDIDATE_BUDGET: f64 = 3e7;
/// Maximum number of squares in one cover.
pub const SQUARE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitneyConfig {
    pub constant: f64,
}

impl Default for WhitneyConfig {
    fn default() -> Self {
        Self { constant: DEFAULT_WHITNEY_CONSTANT }
    }
}

impl WhitneyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.constant.is_finite() && self.constant > 0.0) {
            return Err(LabError::Config(format!("whitney constant {} must be positive", self.constant)));
        }
        Ok(())
    }
}

/// Scale-free description of a square: `[j1 + α1, j1 + α1 + 1] × [j2 + α2, j2 + α2 + 1]` at scale 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WhitneyKey {
    pub j1: i64,
    pub a1: Shift,
    pub j2: i64,
    pub a2: Shift,
}

impl WhitneyKey {
    pub fn x0(&self) -> f64 {
        self.j1 as f64 + self.a1.value()
    }

    pub fn y0(&self) -> f64 {
        self.j2 as f64 + self.a2.value()
    }

    pub fn at_scale(&self, scale: i32) -> WhitneySquareGeometry {
        WhitneySquareGeometry {
            q1: ShiftedDyadicInterval::new(scale, self.j1, self.a1),
            q2: ShiftedDyadicInterval::new(scale, self.j2, self.a2),
        }
    }

    fn corners(&self) -> [(f64, f64); 4] {
        let (x, y) = (self.x0(), self.y0());
        [(x, y), (x + 1.0, y), (x, y + 1.0), (x + 1.0, y + 1.0)]
    }

    /// Infimum distance from the origin at scale 0.
    pub fn dist(&self) -> f64 {
        let (x, y) = (self.x0(), self.y0());
        let cx = 0f64.clamp(x, x + 1.0);
        let cy = 0f64.clamp(y, y + 1.0);
        cx.hypot(cy)
    }

    pub fn center_angle(&self) -> f64 {
        (self.y0() + 0.5).atan2(self.x0() + 0.5)
    }

    pub fn center_radius(&self) -> f64 {
        (self.y0() + 0.5).hypot(self.x0() + 0.5)
    }

    /// The closed square misses `ξ1 = ξ2`; decided exactly on thirds.
    pub fn misses_diagonal(&self) -> bool {
        let x0 = 3 * self.j1 as i128 + self.a1.thirds();
        let y0 = 3 * self.j2 as i128 + self.a2.thirds();
        x0 + 3 < y0 || y0 + 3 < x0
    }

    /// Range of polar angles covered by the square, or `None` if it touches the origin.
    fn angle_span(&self) -> Option<(f64, f64)> {
        if self.dist() == 0.0 {
            return None;
        }
        let wrap = self.x0() + 1.0 < 0.0 && self.y0() < 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in self.corners() {
            let mut a = y.atan2(x);
            if wrap && a < 0.0 {
                a += 2.0 * PI;
            }
            lo = lo.min(a);
            hi = hi.max(a);
        }
        Some((lo, hi))
    }

    pub fn meets_cone(&self, n: u32) -> bool {
        let (tlo, thi) = angle_band(n);
        match self.angle_span() {
            Some((lo, hi)) => lo <= thi && hi >= tlo && self.y0() + 1.0 > 0.0,
            None => false,
        }
    }

    /// All corners strictly on one side of the full line `L_n`.
    pub fn misses_borderline(&self, n: u32) -> bool {
        let (t, _) = angle_band(n);
        let (c, s) = (t.cos(), t.sin());
        let sides: Vec<f64> = self.corners().iter().map(|&(x, y)| y * c - x * s).collect();
        sides.iter().all(|&v| v > 0.0) || sides.iter().all(|&v| v < 0.0)
    }

    /// `diam / (c · w_n · dist)`.
    pub fn ratio(&self, n: u32, cfg: &WhitneyConfig) -> f64 {
        SQRT_2 / (cfg.constant * whitney_width(n) * self.dist())
    }

    pub fn ratio_ok(&self, n: u32, cfg: &WhitneyConfig) -> bool {
        let r = self.ratio(n, cfg);
        (1.0 / RATIO_TOLERANCE..=RATIO_TOLERANCE).contains(&r)
    }

    pub fn admissible(&self, n: u32, cfg: &WhitneyConfig) -> bool {
        self.dist() > 0.0
            && self.ratio_ok(n, cfg)
            && self.misses_diagonal()
            && self.meets_cone(n)
            && self.misses_borderline(n)
    }

    fn slot_order(&self, other: &Self) -> Ordering {
        self.center_angle()
            .total_cmp(&other.center_angle())
            .then(self.center_radius().total_cmp(&other.center_radius()))
            .then(self.cmp(other))
    }
}

/// A pair of equal-length shifted dyadic intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WhitneySquareGeometry {
    pub q1: ShiftedDyadicInterval,
    pub q2: ShiftedDyadicInterval,
}

impl WhitneySquareGeometry {
    pub fn scale(&self) -> i32 {
        self.q1.scale
    }

    pub fn key(&self) -> WhitneyKey {
        WhitneyKey { j1: self.q1.index, a1: self.q1.shift, j2: self.q2.index, a2: self.q2.shift }
    }

    pub fn side(&self) -> f64 {
        self.q1.length_f64()
    }

    pub fn dist(&self) -> f64 {
        self.key().dist() * self.side()
    }

    pub fn diam(&self) -> f64 {
        SQRT_2 * self.side()
    }

    pub fn center(&self) -> (f64, f64) {
        (self.q1.center_f64(), self.q2.center_f64())
    }

    /// Whether `ξ` lies in the closed `λ`-dilate.
    pub fn dilate_contains(&self, lambda: f64, xi: (f64, f64)) -> bool {
        self.q1.dilate_contains(lambda, xi.0) && self.q2.dilate_contains(lambda, xi.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WhitneySquare {
    pub q1: ShiftedDyadicInterval,
    pub q2: ShiftedDyadicInterval,
    pub cone_index: u32,
    /// 1-based angular rank of the square's key.
    pub slot: usize,
}

impl WhitneySquare {
    pub fn geometry(&self) -> WhitneySquareGeometry {
        WhitneySquareGeometry { q1: self.q1, q2: self.q2 }
    }

    pub fn scale(&self) -> i32 {
        self.q1.scale
    }

    pub fn key(&self) -> WhitneyKey {
        self.geometry().key()
    }

    pub fn side(&self) -> f64 {
        self.q1.length_f64()
    }

    pub fn center(&self) -> (f64, f64) {
        self.geometry().center()
    }

    pub fn dist(&self) -> f64 {
        self.geometry().dist()
    }

    /// Checks every structural invariant of a Whitney square.
    pub fn invariants_hold(&self, cfg: &WhitneyConfig) -> bool {
        self.q1.scale == self.q2.scale && self.key().admissible(self.cone_index, cfg)
    }
}

/// Rough count of candidate keys, used to refuse hopeless enumerations early.
pub fn candidate_estimate(n: u32, cfg: &WhitneyConfig) -> f64 {
    let (dmin, dmax) = key_distance_range(n, cfg);
    let (tlo, thi) = angle_band(n);
    let width = dmax * (1.0 / tlo.tan() - 1.0 / thi.tan()).abs() + 3.0;
    9.0 * (dmax - 0.7 * dmin + 2.0).max(1.0) * width
}

/// Distances at scale 0 for which the ratio window can hold.
fn key_distance_range(n: u32, cfg: &WhitneyConfig) -> (f64, f64) {
    let base = SQRT_2 / (cfg.constant * whitney_width(n));
    (base / RATIO_TOLERANCE, base * RATIO_TOLERANCE)
}

/// All admissible keys of cone `n`, in slot order.
pub fn enumerate_keys(n: u32, cfg: &WhitneyConfig) -> Result<Vec<WhitneyKey>> {
    if n == 0 {
        return Err(LabError::Domain("cone indices start at 1".into()));
    }
    cfg.validate()?;
    let estimate = candidate_estimate(n, cfg);
    if !(estimate <= CANDIDATE_BUDGET) {
        return Err(LabError::Budget(format!(
            "cone {n} needs about {estimate:.3e} candidate squares (budget {CANDIDATE_BUDGET:.0e})"
        )));
    }
    let (dmin, dmax) = key_distance_range(n, cfg);
    let (tlo, thi) = angle_band(n);
    let (cot_lo, cot_hi) = (1.0 / tlo.tan(), 1.0 / thi.tan());
    let jmin = (std::f64::consts::FRAC_1_SQRT_2 * dmin - 2.0).floor() as i64;
    let jmax = dmax.ceil() as i64 + 1;
    let mut keys = Vec::new();
    for j2 in jmin..=jmax {
        for a2 in Shift::ALL {
            let y0 = j2 as f64 + a2.value();
            let (ya, yb) = (y0.max(0.0), y0 + 1.0);
            if yb <= 0.0 {
                continue;
            }
            let xs = [ya * cot_lo, yb * cot_lo, ya * cot_hi, yb * cot_hi];
            let xmin = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0;
            let xmax = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
            for j1 in xmin.floor() as i64..=xmax.ceil() as i64 {
                for a1 in Shift::ALL {
                    let key = WhitneyKey { j1, a1, j2, a2 };
                    if key.admissible(n, cfg) {
                        keys.push(key);
                    }
                }
            }
        }
    }
    keys.sort_by(|a, b| a.slot_order(b));
    Ok(keys)
}

/// Scales `k` at which the key's square has distance in `[rmin, rmax]`.
pub fn scales_in_annulus(key: &WhitneyKey, rmin: f64, rmax: f64) -> Vec<i32> {
    let d = key.dist();
    let lo = (d / rmax).log2().floor() as i32 - 1;
    let hi = (d / rmin).log2().ceil() as i32 + 1;
    (lo..=hi).filter(|&k| (rmin..=rmax).contains(&(d * 2f64.powi(-k)))).collect()
}

#[derive(Debug, Clone)]
pub struct WhitneyCover {
    pub n: u32,
    pub annulus: (f64, f64),
    pub config: WhitneyConfig,
    /// Keys in slot order; slot `s` is `keys[s − 1]`.
    pub keys: Vec<WhitneyKey>,
    /// Squares ordered by slot, then scale.
    pub squares: Vec<WhitneySquare>,
}

impl WhitneyCover {
    pub fn slot_count(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}

pub fn validate_annulus(rmin: f64, rmax: f64) -> Result<()> {
    if !(rmin.is_finite() && rmax.is_finite() && 0.0 < rmin && rmin < rmax) {
        return Err(LabError::Domain(format!("annulus [{rmin}, {rmax}] must satisfy 0 < rmin < rmax")));
    }
    Ok(())
}

pub fn whitney_cover(n: u32, annulus: (f64, f64), cfg: &WhitneyConfig) -> Result<WhitneyCover> {
    let (rmin, rmax) = annulus;
    validate_annulus(rmin, rmax)?;
    let keys = enumerate_keys(n, cfg)?;
    let mut squares = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        for k in scales_in_annulus(key, rmin, rmax) {
            let g = key.at_scale(k);
            squares.push(WhitneySquare { q1: g.q1, q2: g.q2, cone_index: n, slot: i + 1 });
            if squares.len() > SQUARE_BUDGET {
                return Err(LabError::Budget(format!(
                    "cover of cone {n} on [{rmin}, {rmax}] exceeds {SQUARE_BUDGET} squares"
                )));
            }
        }
    }
    Ok(WhitneyCover { n, annulus, config: *cfg, keys, squares })
}

/// The family `Q^k_n`: squares of one slot, coarsest scale first.
pub fn subcollection(cover: &WhitneyCover, slot: usize) -> Result<Vec<WhitneySquare>> {
    if slot == 0 || slot > cover.keys.len() {
        return Err(LabError::Domain(format!("slot {slot} outside 1..={}", cover.keys.len())));
    }
    Ok(cover.squares.iter().filter(|s| s.slot == slot).copied().collect())
}
