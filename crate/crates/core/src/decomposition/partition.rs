//! Smooth partition of unity subordinate to Whitney covers: `φ_Q = b_Q / Σ b_{Q'}`.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::SQRT_2;
use std::ops::RangeInclusive;

use super::cones::whitney_width;
use super::dyadic::{Shift, ShiftedDyadicInterval};
use super::whitney::{WhitneyConfig, WhitneyCover, WhitneySquare, WhitneySquareGeometry, RATIO_TOLERANCE};
use crate::error::{LabError, Result};

/// Half-width of the bump support in units of the side length.
pub const BUMP_HALF_WIDTH: f64 = 0.4;
/// Steepness `a` of `exp(a − a/(1 − (x/0.4)²))`.
pub const BUMP_STEEPNESS: f64 = 8.0;

/// One-dimensional profile, equal to 1 at the centre and vanishing with all derivatives at `±0.4`.
pub fn bump_profile(x: f64) -> f64 {
    let y = x / BUMP_HALF_WIDTH;
    let q = 1.0 - y * y;
    if q <= 0.0 {
        0.0
    } else {
        (BUMP_STEEPNESS - BUMP_STEEPNESS / q).exp()
    }
}

/// The candidate bump `b_Q`, supported in the `8/10` dilate of the square.
pub fn raw_bump(g: &WhitneySquareGeometry, xi: (f64, f64)) -> f64 {
    let side = g.side();
    let (c1, c2) = g.center();
    bump_profile((xi.0 - c1) / side) * bump_profile((xi.1 - c2) / side)
}

#[derive(Debug, Clone)]
enum Membership {
    /// Squares of explicit covers, with their cone index.
    Covers { squares: HashMap<WhitneySquareGeometry, u32>, scales: Vec<i32> },
    /// Every admissible square of the listed cones, without radial truncation.
    Cones { cones: Vec<u32>, config: WhitneyConfig },
}

#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    membership: Membership,
}

/// `φ_Q` for one square of a partition.
#[derive(Debug, Clone, Copy)]
pub struct PartitionBump<'a> {
    pub square: WhitneySquare,
    partition: &'a PartitionOfUnity,
}

impl PartitionBump<'_> {
    pub fn eval(&self, xi: (f64, f64)) -> f64 {
        self.partition.phi(&self.square.geometry(), xi)
    }

    pub fn partition(&self) -> &PartitionOfUnity {
        self.partition
    }
}

/// Memo of membership decisions, shared across many evaluations.
pub type MembershipCache = HashMap<WhitneySquareGeometry, bool>;

impl PartitionOfUnity {
    pub fn from_covers(covers: &[WhitneyCover]) -> Self {
        let mut squares = HashMap::new();
        let mut scales = BTreeSet::new();
        for cover in covers {
            for sq in &cover.squares {
                squares.insert(sq.geometry(), sq.cone_index);
                scales.insert(sq.scale());
            }
        }
        Self { membership: Membership::Covers { squares, scales: scales.into_iter().collect() } }
    }

    /// Partition over all squares of the given cones at every scale.
    pub fn from_cones(cones: RangeInclusive<u32>, config: WhitneyConfig) -> Self {
        let cones = cones.filter(|&n| n >= 1).collect();
        Self { membership: Membership::Cones { cones, config } }
    }

    pub fn bump(&self, square: WhitneySquare) -> PartitionBump<'_> {
        PartitionBump { square, partition: self }
    }

    /// Every bump of an explicit-cover partition; empty for cone partitions.
    pub fn bumps(&self) -> Vec<PartitionBump<'_>> {
        match &self.membership {
            Membership::Covers { squares, .. } => {
                let mut out: Vec<_> = squares
                    .iter()
                    .map(|(g, &n)| WhitneySquare { q1: g.q1, q2: g.q2, cone_index: n, slot: 0 })
                    .collect();
                out.sort_by_key(|s| (s.cone_index, s.scale(), s.q1, s.q2));
                out.into_iter().map(|s| self.bump(s)).collect()
            }
            Membership::Cones { .. } => Vec::new(),
        }
    }

    fn candidate_scales(&self, xi: (f64, f64)) -> Vec<i32> {
        match &self.membership {
            Membership::Covers { scales, .. } => scales.clone(),
            Membership::Cones { cones, config } => {
                let r = xi.0.hypot(xi.1);
                if cones.is_empty() || r == 0.0 {
                    return Vec::new();
                }
                let wmax = cones.iter().map(|&n| whitney_width(n)).fold(0.0, f64::max);
                let wmin = cones.iter().map(|&n| whitney_width(n)).fold(f64::INFINITY, f64::min);
                let big = RATIO_TOLERANCE * config.constant * wmax * r / SQRT_2;
                let small = config.constant * wmin * r / (RATIO_TOLERANCE * SQRT_2 + SQRT_2);
                let kmin = (-big.log2()).floor() as i32 - 1;
                let kmax = (-small.log2()).ceil() as i32 + 1;
                (kmin..=kmax).collect()
            }
        }
    }

    fn is_member(&self, g: &WhitneySquareGeometry, cache: &mut MembershipCache) -> bool {
        match &self.membership {
            Membership::Covers { squares, .. } => squares.contains_key(g),
            Membership::Cones { cones, config } => *cache
                .entry(*g)
                .or_insert_with(|| cones.iter().any(|&n| g.key().admissible(n, config))),
        }
    }

    /// Member squares whose interior contains `ξ`.
    pub fn squares_at(&self, xi: (f64, f64), cache: &mut MembershipCache) -> Vec<WhitneySquareGeometry> {
        let mut out = Vec::new();
        for k in self.candidate_scales(xi) {
            for a1 in Shift::ALL {
                let q1 = ShiftedDyadicInterval::containing(k, a1, xi.0);
                for a2 in Shift::ALL {
                    let q2 = ShiftedDyadicInterval::containing(k, a2, xi.1);
                    let g = WhitneySquareGeometry { q1, q2 };
                    if self.is_member(&g, cache) {
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    pub fn denominator_cached(&self, xi: (f64, f64), cache: &mut MembershipCache) -> f64 {
        self.squares_at(xi, cache).iter().map(|g| raw_bump(g, xi)).sum()
    }

    pub fn denominator(&self, xi: (f64, f64)) -> f64 {
        self.denominator_cached(xi, &mut MembershipCache::new())
    }

    pub fn phi_cached(&self, g: &WhitneySquareGeometry, xi: (f64, f64), cache: &mut MembershipCache) -> f64 {
        let b = raw_bump(g, xi);
        if b == 0.0 {
            return 0.0;
        }
        let d = self.denominator_cached(xi, cache);
        if d > 0.0 {
            b / d
        } else {
            0.0
        }
    }

    pub fn phi(&self, g: &WhitneySquareGeometry, xi: (f64, f64)) -> f64 {
        self.phi_cached(g, xi, &mut MembershipCache::new())
    }

    /// `Σ_Q φ_Q(ξ)` summed term by term over the squares containing `ξ`.
    pub fn sum(&self, xi: (f64, f64)) -> f64 {
        let mut cache = MembershipCache::new();
        self.squares_at(xi, &mut cache).iter().map(|g| self.phi_cached(g, xi, &mut cache)).sum()
    }

    /// Fails with a cover gap at the first point where no bump is positive.
    pub fn check_core(&self, points: &[(f64, f64)]) -> Result<()> {
        let mut cache = MembershipCache::new();
        for &p in points {
            if self.denominator_cached(p, &mut cache) <= 0.0 {
                return Err(LabError::CoverGap { xi1: p.0, xi2: p.1 });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::cones::angle_band;
    use crate::decomposition::whitney::{enumerate_keys, whitney_cover};
    use rand::Rng;

    #[test]
    fn profile_shape() {
        assert_eq!(bump_profile(0.0), 1.0);
        assert_eq!(bump_profile(0.4), 0.0);
        assert_eq!(bump_profile(-0.5), 0.0);
        assert!(bump_profile(0.39) > 0.0);
        assert!((bump_profile(0.1) - bump_profile(-0.1)).abs() < 1e-16);
    }

    #[test]
    fn sums_to_one_and_bumps_are_localized() {
        let cfg = WhitneyConfig::default();
        let covers: Vec<_> = (1..=4).map(|n| whitney_cover(n, (1.0, 32.0), &cfg).unwrap()).collect();
        let pu = PartitionOfUnity::from_covers(&covers);
        let (tlo, thi) = angle_band(2);
        let mut rng = crate::stats::stream_rng(5, 1);
        let pts: Vec<_> = (0..500)
            .map(|_| {
                let th = rng.random_range(tlo..thi);
                let r = rng.random_range(4.0..30.0);
                (r * th.cos(), r * th.sin())
            })
            .collect();
        pu.check_core(&pts).unwrap();
        for &p in &pts {
            assert!((pu.sum(p) - 1.0).abs() < 1e-12);
        }
        for sq in covers[0].squares.iter().step_by(97) {
            let bump = pu.bump(*sq);
            let c = sq.center();
            assert!(bump.eval(c) > 0.0);
            let s = sq.side();
            assert_eq!(bump.eval((c.0 + 0.41 * s, c.1)), 0.0);
            assert!((0.0..=1.0).contains(&bump.eval((c.0 + 0.2 * s, c.1 - 0.1 * s))));
        }
    }

    #[test]
    fn gap_is_reported() {
        let pu = PartitionOfUnity::from_covers(&[]);
        let err = pu.check_core(&[(0.1, 3.0)]).unwrap_err();
        assert!(matches!(err, LabError::CoverGap { .. }));
    }

    #[test]
    fn cone_partition_matches_cover_partition_inside() {
        let cfg = WhitneyConfig::default();
        let covers: Vec<_> = (1..=6).map(|n| whitney_cover(n, (0.5, 64.0), &cfg).unwrap()).collect();
        let a = PartitionOfUnity::from_covers(&covers);
        let b = PartitionOfUnity::from_cones(1..=6, cfg);
        let sq = covers[2].squares.iter().find(|s| (6.0..10.0).contains(&s.dist())).unwrap();
        let c = sq.center();
        for i in -3..=3 {
            let p = (c.0 + 0.1 * i as f64 * sq.side(), c.1 + 0.05 * i as f64 * sq.side());
            let (x, y) = (a.phi(&sq.geometry(), p), b.phi(&sq.geometry(), p));
            assert!((x - y).abs() < 1e-12, "{x} {y}");
        }
    }

    #[test]
    fn gradient_scales_inversely_with_side() {
        let cfg = WhitneyConfig::default();
        let pu = PartitionOfUnity::from_cones(1..=5, cfg);
        let key = enumerate_keys(3, &cfg).unwrap()[40];
        let mut maxima = Vec::new();
        for k in [-2, 0, 3] {
            let g = key.at_scale(k);
            let s = g.side();
            let (c1, c2) = g.center();
            let h = 1e-5 * s;
            let mut m: f64 = 0.0;
            for i in -8..=8 {
                for j in -8..=8 {
                    let p = (c1 + 0.045 * i as f64 * s, c2 + 0.045 * j as f64 * s);
                    let dx = (pu.phi(&g, (p.0 + h, p.1)) - pu.phi(&g, (p.0 - h, p.1))) / (2.0 * h);
                    let dy = (pu.phi(&g, (p.0, p.1 + h)) - pu.phi(&g, (p.0, p.1 - h))) / (2.0 * h);
                    m = m.max(dx.hypot(dy) * s);
                }
            }
            maxima.push(m);
        }
        let c = maxima[0];
        assert!(c.is_finite() && c > 0.0);
        for m in &maxima {
            assert!(*m <= 1.01 * c && *m >= 0.99 * c, "{maxima:?}");
        }
    }
}
