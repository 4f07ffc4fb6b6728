//! Coverage and partition-of-unity checks of a Whitney cover on the core of its cone.

use rand::Rng;

use super::coefficients::neighbouring_cones;
use super::cones::angle_band;
use super::partition::{MembershipCache, PartitionOfUnity};
use super::whitney::{whitney_cover, WhitneyConfig, WhitneyCover};
use crate::error::Result;
use crate::stats::stream_rng;

pub const CORE_POINTS: usize = 10_000;
/// Largest number of squares allowed to contain one point.
pub const COVERAGE_LIMIT: usize = 50;
pub const PARTITION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TilingCheck {
    pub cover: WhitneyCover,
    /// Every square passes the proportionality window.
    pub proportionality: bool,
    /// Fewest and most squares containing a core point.
    pub coverage: (usize, usize),
    /// `max |Σ φ_Q − 1|` over the core points.
    pub partition_error: f64,
    pub points: usize,
}

impl TilingCheck {
    pub fn passed(&self) -> bool {
        let coverage_ok = self.points == 0 || (self.coverage.0 >= 1 && self.coverage.1 <= COVERAGE_LIMIT);
        self.proportionality && coverage_ok && self.partition_error <= PARTITION_TOLERANCE
    }
}

/// Points of `C_n` at radii in `[2 rmin, rmax/2]`, log-uniform in radius, uniform in angle.
pub fn core_points(n: u32, annulus: (f64, f64), count: usize, seed: u64) -> Vec<(f64, f64)> {
    let (rlo, rhi) = (2.0 * annulus.0, 0.5 * annulus.1);
    if rlo >= rhi {
        return Vec::new();
    }
    let (tlo, thi) = angle_band(n);
    let mut rng = stream_rng(seed, u64::from(n));
    (0..count)
        .map(|_| {
            let th = rng.random_range(tlo..thi);
            let r = (rng.random_range(rlo.ln()..rhi.ln())).exp();
            (r * th.cos(), r * th.sin())
        })
        .collect()
}

/// Cover of cone `n` on the annulus, checked against the partition built from the neighbouring cones.
pub fn tiling_check(n: u32, annulus: (f64, f64), cfg: &WhitneyConfig, points: usize, seed: u64) -> Result<TilingCheck> {
    let cover = whitney_cover(n, annulus, cfg)?;
    let proportionality = cover.squares.iter().all(|s| s.invariants_hold(cfg));
    let pts = core_points(n, annulus, points, seed);
    let covers = neighbouring_cones(n)
        .map(|m| if m == n { Ok(cover.clone()) } else { whitney_cover(m, annulus, cfg) })
        .collect::<Result<Vec<_>>>()?;
    let pu = PartitionOfUnity::from_covers(&covers);
    pu.check_core(&pts)?;
    let mut cache = MembershipCache::new();
    let mut coverage = (usize::MAX, 0);
    let mut partition_error: f64 = 0.0;
    for &p in &pts {
        let count = pu.squares_at(p, &mut cache).len();
        coverage = (coverage.0.min(count), coverage.1.max(count));
        partition_error = partition_error.max((pu.sum(p) - 1.0).abs());
    }
    if pts.is_empty() {
        coverage = (0, 0);
    }
    Ok(TilingCheck { cover, proportionality, coverage, partition_error, points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_cone_passes() {
        let t = tiling_check(1, (1.0, 64.0), &WhitneyConfig::default(), 2000, 3).unwrap();
        assert!(!t.cover.is_empty());
        assert!(t.passed(), "{:?} {:?} {}", t.coverage, t.proportionality, t.partition_error);
        assert!(t.coverage.0 >= 1);
    }

    #[test]
    fn thin_annulus_has_no_core() {
        assert!(core_points(3, (1.0, 3.0), 100, 0).is_empty());
        let pts = core_points(3, (1.0, 64.0), 100, 0);
        let (tlo, thi) = angle_band(3);
        for (x, y) in pts {
            let (r, th) = (x.hypot(y), y.atan2(x));
            assert!((2.0..=32.0).contains(&r) && (tlo..=thi).contains(&th));
        }
    }
}
