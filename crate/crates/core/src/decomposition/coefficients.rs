//! Fourier coefficients of localized symbols `m_Q = m · φ_Q · φ̃_{Q3}` and their decay.
//!
//! Coordinates are rescaled by the common side `ℓ` and centred at
//! `(centre of the source square, centre of Q3)`; the series has period 2 in each
//! axis, `C_n = ∫ m_Q(ℓ(c + s)) e^{−πi n·s} ds` and `m_Q(ℓ(c + s)) = (1/8) Σ C_n e^{πi n·s}`.
//! The symbol factor in `(ξ1, ξ2)` and the plateau in `ξ3` separate, so
//! `C_{n1,n2,n3} = P_{n1,n2} · A_{n3}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::cones::angle_band;
use super::cube::{complete_to_cube, FrequencyCube};
use super::dyadic::{Shift, ShiftedDyadicInterval};
use super::partition::{MembershipCache, PartitionBump, PartitionOfUnity, BUMP_HALF_WIDTH};
use super::whitney::{
    candidate_estimate, enumerate_keys, WhitneyConfig, WhitneySquare, WhitneySquareGeometry, CANDIDATE_BUDGET,
};
use crate::error::{LabError, Result};
use crate::multiplier::Symbol;
use crate::report::{ScalingReport, ScalingRow};
use crate::stats::loglog_fit;

pub const DEFAULT_NODES: usize = 64;
pub const VERIFY_NODES: usize = 128;
/// Trapezoid nodes for the plateau factor, fixed because its transition layers are thin.
pub const PLATEAU_NODES: usize = 1 << 14;
/// `φ̃` equals 1 on `|u| ≤ 0.45` and vanishes for `|u| ≥ 0.6`, `u` in units of `|Q3|`.
pub const PLATEAU_INNER: f64 = 0.45;
pub const PLATEAU_OUTER: f64 = 0.6;
/// Safety factor relating the coefficient range to the node count.
pub const ALIASING_FACTOR: usize = 8;

/// Smooth step from 0 at `t ≤ 0` to 1 at `t ≥ 1`.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// The plateau `φ̃` in units of `|Q3|` about its centre.
pub fn plateau(u: f64) -> f64 {
    smooth_step((PLATEAU_OUTER - u.abs()) / (PLATEAU_OUTER - PLATEAU_INNER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub cube: FrequencyCube,
    pub n1: i32,
    pub n2: i32,
    pub n3: i32,
    pub value: Complex64,
    pub delta: f64,
}

/// Interior trapezoid nodes of `[−b, b]` split into `intervals` pieces.
fn trapezoid(b: f64, intervals: usize) -> (Vec<f64>, f64) {
    let h = 2.0 * b / intervals as f64;
    ((1..intervals).map(|i| -b + i as f64 * h).collect(), h)
}

/// `φ_Q` sampled on the planar quadrature grid; reusable across symbols.
#[derive(Debug, Clone)]
pub struct BumpSamples {
    pub cube: FrequencyCube,
    pub nodes: usize,
    /// Rescaled node coordinates, identical on both axes.
    pub s: Vec<f64>,
    pub h: f64,
    /// Row-major `φ_Q` values, first index along `ξ1`.
    pub phi: Vec<f64>,
}

impl BumpSamples {
    pub fn new(bump: &PartitionBump<'_>, cube: &FrequencyCube, nodes: usize) -> Result<Self> {
        if nodes < 8 {
            return Err(LabError::Config(format!("{nodes} quadrature nodes is too few")));
        }
        if bump.square != cube.source {
            return Err(LabError::Domain("bump and cube belong to different squares".into()));
        }
        let l = cube.side();
        let b = BUMP_HALF_WIDTH * cube.source.side() / l;
        let (s, h) = trapezoid(b, nodes);
        let (c1, c2) = cube.source.center();
        let g = cube.source.geometry();
        let partition = bump.partition();
        let phi = s
            .par_iter()
            .map(|&s1| {
                let mut cache = MembershipCache::new();
                s.iter()
                    .map(|&s2| partition.phi_cached(&g, (c1 + l * s1, c2 + l * s2), &mut cache))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .concat();
        Ok(Self { cube: *cube, nodes, s, h, phi })
    }

    pub fn point(&self, i1: usize, i2: usize) -> (f64, f64) {
        let l = self.cube.side();
        let (c1, c2) = self.cube.source.center();
        (c1 + l * self.s[i1], c2 + l * self.s[i2])
    }
}

/// Coefficients on the box `|n_j| ≤ radius`.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub cube: FrequencyCube,
    pub delta: f64,
    pub radius: i32,
    pub nodes: usize,
    planar: Vec<Complex64>,
    axial: Vec<Complex64>,
    planar_energy: f64,
    axial_energy: f64,
    centre_value: Complex64,
}

fn phases(s: &[f64], radius: i32) -> Vec<Vec<Complex64>> {
    (-radius..=radius)
        .map(|n| s.iter().map(|&x| Complex64::from_polar(1.0, -PI * n as f64 * x)).collect())
        .collect()
}

fn axial_coefficients(radius: i32) -> (Vec<Complex64>, f64) {
    let (s, h) = trapezoid(PLATEAU_OUTER, PLATEAU_NODES);
    let vals: Vec<f64> = s.iter().map(|&u| plateau(u)).collect();
    let coeffs = (-radius..=radius)
        .map(|n| {
            let acc: Complex64 = s
                .iter()
                .zip(&vals)
                .map(|(&u, &v)| v * Complex64::from_polar(1.0, -PI * n as f64 * u))
                .sum();
            acc * h
        })
        .collect();
    let energy = h * vals.iter().map(|v| v * v).sum::<f64>();
    (coeffs, energy)
}

impl CoefficientTable {
    fn index(&self, n: i32) -> usize {
        (n + self.radius) as usize
    }

    fn width(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn get(&self, n1: i32, n2: i32, n3: i32) -> Complex64 {
        let r = self.radius;
        assert!(n1.abs() <= r && n2.abs() <= r && n3.abs() <= r, "index outside the table");
        self.planar[self.index(n1) * self.width() + self.index(n2)] * self.axial[self.index(n3)]
    }

    pub fn coefficients(&self) -> Vec<FourierCoefficient> {
        let r = self.radius;
        let mut out = Vec::with_capacity(self.width().pow(3));
        for n1 in -r..=r {
            for n2 in -r..=r {
                for n3 in -r..=r {
                    out.push(FourierCoefficient {
                        cube: self.cube,
                        n1,
                        n2,
                        n3,
                        value: self.get(n1, n2, n3),
                        delta: self.delta,
                    });
                }
            }
        }
        out
    }

    /// `max |C_n|` over `|n_j| ≤ r`.
    pub fn max_abs(&self, r: i32) -> f64 {
        let r = r.min(self.radius);
        let mut m: f64 = 0.0;
        for n1 in -r..=r {
            for n2 in -r..=r {
                for n3 in -r..=r {
                    m = m.max(self.get(n1, n2, n3).norm());
                }
            }
        }
        m
    }

    /// `∫ |m_Q(ℓ ·)|²` by the same quadrature.
    pub fn energy(&self) -> f64 {
        self.planar_energy * self.axial_energy
    }

    /// `(1/8) Σ_box |C_n|²`.
    pub fn box_energy(&self) -> f64 {
        let p: f64 = self.planar.iter().map(|c| c.norm_sqr()).sum();
        let a: f64 = self.axial.iter().map(|c| c.norm_sqr()).sum();
        p * a / 8.0
    }

    /// Relative Parseval gap `1 − box energy / energy`.
    pub fn parseval_gap(&self) -> f64 {
        1.0 - self.box_energy() / self.energy()
    }

    /// Truncated series at rescaled offset `s` from the cell centre.
    pub fn resynthesize(&self, s: [f64; 3]) -> Complex64 {
        let r = self.radius;
        let e = |n: i32, x: f64| Complex64::from_polar(1.0, PI * n as f64 * x);
        let mut planar = Complex64::new(0.0, 0.0);
        for n1 in -r..=r {
            for n2 in -r..=r {
                planar += self.planar[self.index(n1) * self.width() + self.index(n2)] * e(n1, s[0]) * e(n2, s[1]);
            }
        }
        let axial: Complex64 = (-r..=r).map(|n| self.axial[self.index(n)] * e(n, s[2])).sum();
        planar * axial / 8.0
    }

    /// `m_Q` at the cell centre.
    pub fn centre_value(&self) -> Complex64 {
        self.centre_value
    }
}

pub fn check_range(radius: i32, nodes: usize) -> Result<()> {
    let limit = (nodes / ALIASING_FACTOR) as i32;
    if radius < 0 || radius > limit {
        return Err(LabError::AliasingRisk { index: radius as i64, limit: limit as i64 });
    }
    Ok(())
}

/// Coefficients of `m · φ_Q · φ̃` from pre-sampled `φ_Q`.
pub fn coefficients_from_samples(m: &Symbol, samples: &BumpSamples, radius: i32) -> Result<CoefficientTable> {
    check_range(radius, samples.nodes)?;
    let k = samples.s.len();
    let mut f = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            let phi = samples.phi[i * k + j];
            if phi != 0.0 {
                let (x, y) = samples.point(i, j);
                f[i * k + j] = m.eval(x, y) * phi;
            }
        }
    }
    let e = phases(&samples.s, radius);
    let w = e.len();
    // g[i][n2] = Σ_j f[i][j] e_{n2}(s_j), then P[n1][n2] = Σ_i e_{n1}(s_i) g[i][n2].
    let g: Vec<Complex64> = (0..k)
        .flat_map(|i| {
            let row = &f[i * k..(i + 1) * k];
            e.iter().map(move |en| row.iter().zip(en).map(|(a, b)| a * b).sum::<Complex64>())
        })
        .collect();
    let h2 = samples.h * samples.h;
    let mut planar = vec![Complex64::new(0.0, 0.0); w * w];
    for (a, en1) in e.iter().enumerate() {
        for b in 0..w {
            let acc: Complex64 = (0..k).map(|i| en1[i] * g[i * w + b]).sum();
            planar[a * w + b] = acc * h2;
        }
    }
    let planar_energy = h2 * f.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let (axial, axial_energy) = axial_coefficients(radius);
    let (c1, c2) = samples.cube.source.center();
    let bump = samples.phi_at_centre();
    Ok(CoefficientTable {
        cube: samples.cube,
        delta: m.delta(),
        radius,
        nodes: samples.nodes,
        planar,
        axial,
        planar_energy,
        axial_energy,
        centre_value: m.eval(c1, c2) * bump * plateau(0.0),
    })
}

impl BumpSamples {
    fn phi_at_centre(&self) -> f64 {
        // The node count is even, so the centre is a node.
        let k = self.s.len();
        self.phi[(k / 2) * k + k / 2]
    }
}

pub fn fourier_coefficients(
    m: &Symbol,
    cube: &FrequencyCube,
    bump: &PartitionBump<'_>,
    radius: i32,
    nodes: usize,
) -> Result<CoefficientTable> {
    check_range(radius, nodes)?;
    if !nodes.is_multiple_of(2) {
        return Err(LabError::Config("node count must be even".into()));
    }
    coefficients_from_samples(m, &BumpSamples::new(bump, cube, nodes)?, radius)
}

/// Largest relative change of the coefficients with `|n_j| ≤ radius` between two tables.
pub fn refinement_gap(a: &CoefficientTable, b: &CoefficientTable, radius: i32) -> f64 {
    let scale = b.max_abs(radius);
    let mut gap: f64 = 0.0;
    for n1 in -radius..=radius {
        for n2 in -radius..=radius {
            for n3 in -radius..=radius {
                gap = gap.max((a.get(n1, n2, n3) - b.get(n1, n2, n3)).norm());
            }
        }
    }
    gap / scale
}

/// Cones whose squares can overlap the centre of `C_n`.
pub fn neighbouring_cones(n: u32) -> std::ops::RangeInclusive<u32> {
    n.saturating_sub(2).max(1)..=n + 6
}

/// The finest square of `C_n` around the band's central direction at radius 1,
/// preferring squares whose cube has the minimal magnification 4.
pub fn representative_square(n: u32, cfg: &WhitneyConfig) -> Result<WhitneySquare> {
    let keys = enumerate_keys(n, cfg)?;
    let (tlo, thi) = angle_band(n);
    let th = 0.5 * (tlo + thi);
    let p = (th.cos(), th.sin());
    let mut best: Option<(bool, f64, WhitneySquareGeometry)> = None;
    for k in (-4..=40).rev() {
        for a1 in Shift::ALL {
            for a2 in Shift::ALL {
                let q1 = ShiftedDyadicInterval::containing(k, a1, p.0);
                let q2 = ShiftedDyadicInterval::containing(k, a2, p.1);
                let g = WhitneySquareGeometry { q1, q2 };
                if !g.key().admissible(n, cfg) {
                    continue;
                }
                let centrality = [(q1, p.0), (q2, p.1)]
                    .iter()
                    .map(|(q, x)| 0.5 - ((x - q.lo_f64()) / q.length_f64() - 0.5).abs())
                    .fold(f64::INFINITY, f64::min);
                let sq = WhitneySquare { q1, q2, cone_index: n, slot: 0 };
                let minimal = complete_to_cube(&sq).magnification() == 4;
                let better = match &best {
                    None => true,
                    Some((bm, bc, _)) => (minimal, centrality) > (*bm, *bc),
                };
                if better {
                    best = Some((minimal, centrality, g));
                }
            }
        }
        if best.as_ref().is_some_and(|b| b.0) {
            break;
        }
    }
    let (_, _, g) = best.ok_or_else(|| LabError::Domain(format!("no square of cone {n} near its axis")))?;
    let slot = keys
        .iter()
        .position(|key| *key == g.key())
        .ok_or_else(|| LabError::Domain("representative key missing from the enumeration".into()))?
        + 1;
    Ok(WhitneySquare { q1: g.q1, q2: g.q2, cone_index: n, slot })
}

/// Pre-computed representative cubes and sampled bumps for cones `1..=n_max`.
#[derive(Debug, Clone)]
pub struct DecayGeometry {
    pub config: WhitneyConfig,
    pub entries: Vec<BumpSamples>,
}

impl DecayGeometry {
    pub fn build(n_max: u32, nodes: usize, cfg: &WhitneyConfig) -> Result<Self> {
        let estimate = candidate_estimate(n_max, cfg);
        if !(estimate <= CANDIDATE_BUDGET) {
            return Err(LabError::Budget(format!(
                "cone {n_max} needs about {estimate:.3e} candidate squares (budget {CANDIDATE_BUDGET:.0e})"
            )));
        }
        Self::for_cones(&(1..=n_max).collect::<Vec<_>>(), nodes, cfg)
    }

    pub fn for_cones(cones: &[u32], nodes: usize, cfg: &WhitneyConfig) -> Result<Self> {
        if cones.is_empty() {
            return Err(LabError::Domain("need at least one cone".into()));
        }
        let squares = cones
            .par_iter()
            .map(|&n| representative_square(n, cfg))
            .collect::<Result<Vec<_>>>()?;
        Self::sample(squares, nodes, cfg)
    }

    fn sample(squares: Vec<WhitneySquare>, nodes: usize, cfg: &WhitneyConfig) -> Result<Self> {
        let entries = squares
            .into_iter()
            .map(|sq| {
                let cube = complete_to_cube(&sq);
                let pu = PartitionOfUnity::from_cones(neighbouring_cones(sq.cone_index), *cfg);
                BumpSamples::new(&pu.bump(sq), &cube, nodes)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { config: *cfg, entries })
    }

    /// Same representatives sampled with another node count.
    pub fn resampled(&self, nodes: usize) -> Result<Self> {
        Self::sample(self.entries.iter().map(|e| e.cube.source).collect(), nodes, &self.config)
    }
}

/// Box radius for the reported maxima.
pub const REPORT_RADIUS: i32 = 2;
/// Lattice sweep `|n1| ≤ 16`, which needs 128 nodes.
pub const LATTICE_RADIUS: i32 = 16;
/// Exponent enforced for the lattice-direction decay.
pub const LATTICE_EXPONENT: f64 = 6.0;
/// Largest cone used to calibrate the envelope constant.
pub const CALIBRATION_CONES: u32 = 4;
/// Headroom on the calibrated constant; the partition mass of a representative varies by up to 2.
pub const ENVELOPE_SLACK: f64 = 2.0;

pub fn envelope(delta: f64, n: u32) -> f64 {
    (-delta * (n as f64).sqrt()).exp() + (n as f64).powi(-3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub n: u32,
    pub slot: usize,
    pub max_coefficient: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDecay {
    pub cone: u32,
    /// `(n1, |C_{n1,0,0}| / |C_{0,0,0}|)` for `0 ≤ n1 ≤ 16`.
    pub ratios: Vec<(i32, f64)>,
    /// Slope of `ln ratio` against `ln(1 + n1)`.
    pub slope: f64,
    /// Smallest `C1` with `ratio ≤ C1 (1 + n1)^{−6}`.
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientDecayReport {
    pub delta: f64,
    pub rows: Vec<DecayRow>,
    /// Envelope constant fitted on `n ≤ 4`, slack included.
    pub c0: f64,
    pub envelope_holds: bool,
    /// False when `δ = 0`, where the envelope degenerates to a constant.
    pub exponential_gain: bool,
    pub scaling: ScalingReport,
}

impl CoefficientDecayReport {
    pub fn note(&self) -> &'static str {
        if self.exponential_gain {
            "exponential gain"
        } else {
            "no exponential gain"
        }
    }
}

pub fn decay_report_from(m: &Symbol, geometry: &DecayGeometry) -> Result<CoefficientDecayReport> {
    let delta = m.delta();
    let rows = geometry
        .entries
        .par_iter()
        .map(|s| {
            let table = coefficients_from_samples(m, s, REPORT_RADIUS)?;
            let n = s.cube.source.cone_index;
            Ok(DecayRow { n, slot: s.cube.source.slot, max_coefficient: table.max_abs(REPORT_RADIUS), envelope: envelope(delta, n) })
        })
        .collect::<Result<Vec<_>>>()?;
    let c0 = rows
        .iter()
        .filter(|r| r.n <= CALIBRATION_CONES)
        .map(|r| r.max_coefficient / r.envelope)
        .fold(0.0, f64::max)
        * ENVELOPE_SLACK;
    let envelope_holds = rows.iter().all(|r| r.max_coefficient <= c0 * r.envelope * (1.0 + 1e-12));
    let scaling = ScalingReport::fit(
        rows.iter()
            .map(|r| ScalingRow { parameter: r.n as f64, value: r.max_coefficient, stderr: 0.0 })
            .collect(),
        0.0,
        0,
    )?;
    Ok(CoefficientDecayReport { delta, rows, c0, envelope_holds, exponential_gain: delta > 0.0, scaling })
}

pub fn coefficient_decay_report(m: &Symbol, n_max: u32, cfg: &WhitneyConfig) -> Result<CoefficientDecayReport> {
    if n_max == 0 {
        return Err(LabError::Domain("n_max must be at least 1".into()));
    }
    decay_report_from(m, &DecayGeometry::build(n_max, DEFAULT_NODES, cfg)?)
}

/// Decay of `|C_{n1,0,0}|` along the first lattice axis for the representative of cone `n`.
pub fn lattice_decay(m: &Symbol, n: u32, cfg: &WhitneyConfig) -> Result<LatticeDecay> {
    let geo = DecayGeometry::for_cones(&[n], VERIFY_NODES, cfg)?;
    let table = coefficients_from_samples(m, &geo.entries[0], LATTICE_RADIUS)?;
    let c0 = table.get(0, 0, 0).norm();
    let ratios: Vec<(i32, f64)> = (0..=LATTICE_RADIUS).map(|k| (k, table.get(k, 0, 0).norm() / c0)).collect();
    let xs: Vec<f64> = ratios.iter().map(|&(k, _)| 1.0 + k as f64).collect();
    let ys: Vec<f64> = ratios.iter().map(|&(_, r)| r.max(f64::MIN_POSITIVE)).collect();
    let slope = loglog_fit(&xs, &ys)?.slope;
    let c1 = ratios
        .iter()
        .map(|&(k, r)| r * (1.0 + k as f64).powf(LATTICE_EXPONENT))
        .fold(0.0, f64::max);
    Ok(LatticeDecay { cone: n, ratios, slope, c1 })
}

/// Largest relative change of `|n_j| ≤ radius` coefficients between two samplings of the same cubes.
pub fn quadrature_consistency(m: &Symbol, coarse: &DecayGeometry, fine: &DecayGeometry, radius: i32) -> Result<f64> {
    coarse
        .entries
        .par_iter()
        .zip(&fine.entries)
        .map(|(a, b)| {
            let ta = coefficients_from_samples(m, a, radius)?;
            let tb = coefficients_from_samples(m, b, radius)?;
            Ok(refinement_gap(&ta, &tb, radius))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32, nodes: usize) -> BumpSamples {
        DecayGeometry::for_cones(&[n], nodes, &WhitneyConfig::default()).unwrap().entries.remove(0)
    }

    #[test]
    fn plateau_shape() {
        assert_eq!(plateau(0.0), 1.0);
        assert_eq!(plateau(0.45), 1.0);
        assert_eq!(plateau(-0.6), 0.0);
        assert!((plateau(0.525) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn representative_is_valid() {
        let cfg = WhitneyConfig::default();
        for n in [1, 2, 3, 10] {
            let sq = representative_square(n, &cfg).unwrap();
            assert!(sq.invariants_hold(&cfg));
            assert!(sq.slot >= 1);
            let cube = complete_to_cube(&sq);
            assert!(cube.containment_holds());
        }
    }

    #[test]
    fn linearity_is_exact() {
        let s = setup(3, 64);
        let m = Symbol::exp_decay(1.0);
        let c = Complex64::new(2.5, -1.0);
        let a = coefficients_from_samples(&m, &s, 4).unwrap();
        let b = coefficients_from_samples(&m.scaled(c), &s, 4).unwrap();
        for n1 in -4..=4 {
            for n3 in -4..=4 {
                let (x, y) = (a.get(n1, 1, n3) * c, b.get(n1, 1, n3));
                assert!((x - y).norm() <= 1e-14 * x.norm().max(1e-300), "{x} {y}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry_for_real_symbols() {
        let s = setup(2, 64);
        let t = coefficients_from_samples(&Symbol::exp_decay(0.5), &s, 3).unwrap();
        let scale = t.max_abs(3);
        for n1 in -3..=3 {
            for n2 in -3..=3 {
                let d = t.get(n1, n2, 1) - t.get(-n1, -n2, -1).conj();
                assert!(d.norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn aliasing_guard() {
        let s = setup(1, 64);
        let err = coefficients_from_samples(&Symbol::one(), &s, 9).unwrap_err();
        assert!(matches!(err, LabError::AliasingRisk { index: 9, limit: 8 }));
    }

    #[test]
    fn refinement_is_stable() {
        let m = Symbol::exp_decay(1.0);
        let coarse = DecayGeometry::for_cones(&[1, 5], DEFAULT_NODES, &WhitneyConfig::default()).unwrap();
        let fine = coarse.resampled(VERIFY_NODES).unwrap();
        let gap = quadrature_consistency(&m, &coarse, &fine, 8).unwrap();
        assert!(gap < 1e-8, "{gap}");
    }

    #[test]
    fn parseval_and_resynthesis_converge() {
        // The equalized cell is four times the source side, so the series needs a wide box.
        let s = setup(2, 768);
        let m = Symbol::exp_decay(1.0);
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for r in [24, 48, 96] {
            let t = coefficients_from_samples(&m, &s, r).unwrap();
            let gap = t.parseval_gap();
            let v = t.centre_value();
            let err = (t.resynthesize([0.0; 3]) - v).norm() / v.norm();
            assert!(gap >= -1e-12 && gap < prev.0 && err < prev.1, "{r}: {gap} {err}");
            prev = (gap, err);
        }
        assert!(prev.0 < 1e-6, "{}", prev.0);
        assert!(prev.1 < 1e-3, "{}", prev.1);
    }
}
