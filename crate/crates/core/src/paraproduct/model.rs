//! The model operator `Π`, the trilinear form `Λ`, and the maximal and square operators.

use num_complex::Complex64;

use super::packets::{make_wave_packet, packet_profile, WavePacket};
use super::tiles::TileCollection;
use crate::error::{LabError, Result};
use crate::grid::{forward_transform, inverse_transform, Grid, SampledFunction, Spectrum};

/// Wave packets of every tile of a collection on one grid.
#[derive(Debug, Clone)]
pub struct ModelOperator {
    pub collection: TileCollection,
    pub grid: Grid,
    packets: Vec<[WavePacket; 3]>,
}

/// Pairings of a function with the slot-`j` packets, one per tile.
///
/// Slots 1 and 2 use the sesquilinear product `⟨f, Φ⟩`; slot 3 uses `∫ f Φ`, so that
/// `Λ(f1, f2, f3) = ∫ Π(f1, f2) f3`.
pub fn pairings(op: &ModelOperator, f: &Spectrum, slot: usize) -> Vec<Complex64> {
    assert!((1..=3).contains(&slot), "slots are 1, 2, 3");
    op.packets
        .iter()
        .map(|p| if slot == 3 { p[2].spectrum.pairing(f) } else { p[slot - 1].spectrum.inner(f) })
        .collect()
}

impl ModelOperator {
    pub fn new(collection: &TileCollection, grid: &Grid) -> Result<Self> {
        let packets = collection
            .tiles
            .iter()
            .map(|t| {
                let mk = |j: usize| make_wave_packet(t.interval, t.omega[j], packet_profile, grid);
                Ok([mk(0)?, mk(1)?, mk(2)?])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { collection: collection.clone(), grid: *grid, packets })
    }

    /// The operator of the first `count` tiles, sharing the packets already built.
    pub fn prefix(&self, count: usize) -> Self {
        let count = count.min(self.len());
        Self { collection: self.collection.prefix(count), grid: self.grid, packets: self.packets[..count].to_vec() }
    }

    pub fn packets(&self, tile: usize) -> &[WavePacket; 3] {
        &self.packets[tile]
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    fn check(&self, f: &SampledFunction) -> Result<Spectrum> {
        if *f.grid() != self.grid {
            return Err(LabError::GridMismatch);
        }
        Ok(forward_transform(f))
    }

    fn coefficients<'a>(&self, coeffs: Option<&'a [Complex64]>) -> Result<std::borrow::Cow<'a, [Complex64]>> {
        match coeffs {
            Some(c) if c.len() != self.len() => Err(LabError::Domain(format!(
                "{} coefficients for {} tiles",
                c.len(),
                self.len()
            ))),
            Some(c) if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) => {
                Err(LabError::Domain("non-finite tile coefficient".into()))
            }
            Some(c) => Ok(std::borrow::Cow::Borrowed(c)),
            None => Ok(std::borrow::Cow::Owned(vec![Complex64::new(1.0, 0.0); self.len()])),
        }
    }

    /// Spectrum of `Π(f1, f2)` from the spectra of the inputs.
    pub fn apply_spectra(&self, coeffs: Option<&[Complex64]>, s1: &Spectrum, s2: &Spectrum) -> Result<Spectrum> {
        let c = self.coefficients(coeffs)?;
        let a1 = pairings(self, s1, 1);
        let a2 = pairings(self, s2, 2);
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (i, p) in self.packets.iter().enumerate() {
            let w = c[i] * a1[i] * a2[i] / p[2].interval.length().sqrt();
            p[2].spectrum.accumulate(w, &self.grid, &mut out);
        }
        Spectrum::new(self.grid, out)
    }
}

/// `Π(f1, f2)(x) = Σ_P c_P |I_P|^{−1/2} ⟨f1, Φ¹⟩⟨f2, Φ²⟩ Φ³(x)`; unit coefficients when `coeffs` is `None`.
pub fn model_apply(
    op: &ModelOperator,
    coeffs: Option<&[Complex64]>,
    f1: &SampledFunction,
    f2: &SampledFunction,
) -> Result<SampledFunction> {
    let (s1, s2) = (op.check(f1)?, op.check(f2)?);
    Ok(inverse_transform(&op.apply_spectra(coeffs, &s1, &s2)?))
}

/// `Λ(f1, f2, f3) = Σ_P c_P |I_P|^{−1/2} ⟨f1, Φ¹⟩⟨f2, Φ²⟩ ∫ f3 Φ³`.
pub fn trilinear_form(
    op: &ModelOperator,
    coeffs: Option<&[Complex64]>,
    f1: &SampledFunction,
    f2: &SampledFunction,
    f3: &SampledFunction,
) -> Result<Complex64> {
    let c = op.coefficients(coeffs)?;
    let (s1, s2, s3) = (op.check(f1)?, op.check(f2)?, op.check(f3)?);
    let (a1, a2, a3) = (pairings(op, &s1, 1), pairings(op, &s2, 2), pairings(op, &s3, 3));
    Ok(op
        .packets
        .iter()
        .enumerate()
        .map(|(i, p)| c[i] * a1[i] * a2[i] * a3[i] / p[0].interval.length().sqrt())
        .sum())
}

/// A function that is constant on each `[breaks[i], breaks[i+1])` and zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn eval(&self, x: f64) -> f64 {
        match self.breaks.partition_point(|&b| b <= x) {
            0 => 0.0,
            i if i >= self.breaks.len() => 0.0,
            i => self.values[i - 1],
        }
    }

    pub fn sample(&self, grid: &Grid) -> SampledFunction {
        SampledFunction::from_real_fn(*grid, |x| self.eval(x)).expect("finite values")
    }

    /// `(∫ |g|^p)^{1/p}`, exact.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.values.iter().zip(self.breaks.windows(2)).map(|(v, w)| v.abs().powf(p) * (w[1] - w[0])).sum();
        s.powf(1.0 / p)
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.breaks.windows(2)).map(|(v, w)| v * (w[1] - w[0])).sum()
    }
}

/// Per-tile values `|a_P|² / |I_P|`, combined on the common breakpoints by `fold`.
fn per_segment(op: &ModelOperator, weights: &[f64], init: f64, fold: fn(f64, f64) -> f64) -> PiecewiseConstant {
    let breaks = op.collection.breakpoints();
    let mut values = vec![init; breaks.len().saturating_sub(1)];
    for (t, w) in op.collection.tiles.iter().zip(weights) {
        let a = breaks.partition_point(|&b| b < t.interval.lo());
        let b = breaks.partition_point(|&b| b < t.interval.hi());
        for v in &mut values[a..b] {
            *v = fold(*v, *w);
        }
    }
    PiecewiseConstant { breaks, values }
}

fn max_piecewise(op: &ModelOperator, a: &[Complex64]) -> PiecewiseConstant {
    let w: Vec<f64> = op.packets.iter().zip(a).map(|(p, v)| v.norm() / p[0].interval.length().sqrt()).collect();
    per_segment(op, &w, 0.0, f64::max)
}

fn square_piecewise(op: &ModelOperator, a: &[Complex64]) -> PiecewiseConstant {
    let w: Vec<f64> = op.packets.iter().zip(a).map(|(p, v)| v.norm_sqr() / p[0].interval.length()).collect();
    let mut g = per_segment(op, &w, 0.0, |x, y| x + y);
    for v in &mut g.values {
        *v = v.sqrt();
    }
    g
}

/// `M(f)(x) = sup_P |⟨f, Φ^j⟩| |I_P|^{−1/2} χ_{I_P}(x)`.
pub fn maximal_op(op: &ModelOperator, f: &SampledFunction, slot: usize) -> Result<PiecewiseConstant> {
    Ok(max_piecewise(op, &pairings(op, &op.check(f)?, slot)))
}

/// `S(f)(x) = (Σ_P |⟨f, Φ^j⟩|² |I_P|^{−1} χ_{I_P}(x))^{1/2}`.
pub fn square_op(op: &ModelOperator, f: &SampledFunction, slot: usize) -> Result<PiecewiseConstant> {
    Ok(square_piecewise(op, &pairings(op, &op.check(f)?, slot)))
}

/// Which slot receives the maximal operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Roles {
    /// `M(f1) S(f2) S(f3)`.
    Standard,
    /// `S(f1) S(f2) M(f3)`, used for the first cone.
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domination {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub const DOMINATION_TOLERANCE: f64 = 1e-8;

/// `Σ_P |I_P|^{−1/2} |a1 a2 a3|` against `∫ M S S`, from precomputed pairings.
pub fn domination_from_pairings(op: &ModelOperator, a: [&[Complex64]; 3], roles: Roles) -> Domination {
    let lhs: f64 = op
        .packets
        .iter()
        .enumerate()
        .map(|(i, p)| (a[0][i] * a[1][i] * a[2][i]).norm() / p[0].interval.length().sqrt())
        .sum();
    let m_slot = match roles {
        Roles::Standard => 0,
        Roles::Swapped => 2,
    };
    let pieces: Vec<PiecewiseConstant> = (0..3)
        .map(|j| if j == m_slot { max_piecewise(op, a[j]) } else { square_piecewise(op, a[j]) })
        .collect();
    let rhs: f64 = pieces[0]
        .breaks
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[1] - w[0]) * pieces[0].values[i] * pieces[1].values[i] * pieces[2].values[i])
        .sum();
    Domination { lhs, rhs, pass: lhs <= rhs * (1.0 + DOMINATION_TOLERANCE) }
}

pub fn domination_check(
    op: &ModelOperator,
    f1: &SampledFunction,
    f2: &SampledFunction,
    f3: &SampledFunction,
    roles: Roles,
) -> Result<Domination> {
    let (s1, s2, s3) = (op.check(f1)?, op.check(f2)?, op.check(f3)?);
    let (a1, a2, a3) = (pairings(op, &s1, 1), pairings(op, &s2, 2), pairings(op, &s3, 3));
    Ok(domination_from_pairings(op, [&a1, &a2, &a3], roles))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::grid::{lp_quasinorm, Window};
    use crate::paraproduct::tiles::build_tiles;
    use crate::paraproduct::tiles::tests::cube;
    use crate::stats::stream_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub(crate) fn grid() -> Grid {
        Grid::centered(2048, 32.0, 0.0).unwrap()
    }

    /// Complex Gaussian spectrum on `[lo, hi]`.
    pub(crate) fn random_band(grid: &Grid, lo: f64, hi: f64, seed: u64, stream: u64) -> SampledFunction {
        let mut rng = stream_rng(seed, stream);
        let coeffs = (0..grid.len())
            .map(|i| {
                let xi = grid.frequency(i);
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                if (lo..=hi).contains(&xi) {
                    Complex64::new(re, im)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        inverse_transform(&Spectrum::new(*grid, coeffs).unwrap())
    }

    fn mixed() -> ModelOperator {
        let coll = build_tiles(&[cube(0, [2, 5, -9]), cube(1, [1, 3, -5]), cube(2, [1, 2, -3])], (-4.0, 4.0)).unwrap();
        ModelOperator::new(&coll, &grid()).unwrap()
    }

    fn triple(seed: u64) -> [SampledFunction; 3] {
        let g = grid();
        [
            random_band(&g, 1.5, 13.0, seed, 1),
            random_band(&g, 4.5, 13.0, seed, 2),
            random_band(&g, 7.0, 13.0, seed, 3),
        ]
    }

    #[test]
    fn single_tile_reproduces_third_packet() {
        let coll = build_tiles(&[cube(1, [2, 5, -9])], (0.0, 0.5)).unwrap();
        let op = ModelOperator::new(&coll, &grid()).unwrap();
        let [p1, p2, p3] = op.packets(0).clone();
        let out = model_apply(&op, None, &p1.samples(), &p2.samples()).unwrap();
        let expect = p3.samples().scale(Complex64::new(2f64.sqrt(), 0.0));
        let diff = out.combine(Complex64::new(1.0, 0.0), &expect, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(diff.sup_norm() < 1e-10 * expect.sup_norm());
    }

    #[test]
    fn frequency_disjoint_input_gives_zero() {
        let op = mixed();
        let g = grid();
        let f1 = random_band(&g, 20.0, 28.0, 1, 0);
        let f2 = random_band(&g, 4.5, 13.0, 1, 1);
        let out = model_apply(&op, None, &f1, &f2).unwrap();
        assert!(out.sup_norm() < 1e-10);
    }

    #[test]
    fn duality_identity() {
        let op = mixed();
        let g = grid();
        for seed in 0..20 {
            let [f1, f2, f3] = triple(seed);
            let lam = trilinear_form(&op, None, &f1, &f2, &f3).unwrap();
            let pi = model_apply(&op, None, &f1, &f2).unwrap();
            let integral: Complex64 =
                pi.values().iter().zip(f3.values()).map(|(a, b)| a * b).sum::<Complex64>() * g.spacing();
            assert!((lam - integral).norm() <= 1e-8 * lam.norm(), "{lam} {integral}");
        }
    }

    #[test]
    fn domination_single_tile_is_equality() {
        let coll = build_tiles(&[cube(1, [2, 5, -9])], (0.0, 0.5)).unwrap();
        let op = ModelOperator::new(&coll, &grid()).unwrap();
        let [f1, f2, f3] = triple(3);
        let d = domination_check(&op, &f1, &f2, &f3, Roles::Standard).unwrap();
        assert!((d.lhs - d.rhs).abs() <= 1e-12 * d.rhs && d.pass);
    }

    #[test]
    fn domination_mixed_scales_both_roles() {
        let op = mixed();
        for seed in 0..50 {
            let [f1, f2, f3] = triple(100 + seed);
            for roles in [Roles::Standard, Roles::Swapped] {
                let d = domination_check(&op, &f1, &f2, &f3, roles).unwrap();
                assert!(d.pass && d.lhs > 0.0, "{d:?}");
            }
        }
    }

    #[test]
    fn square_function_mass() {
        let op = mixed();
        let [f1, ..] = triple(9);
        let s = square_op(&op, &f1, 1).unwrap();
        let a = pairings(&op, &forward_transform(&f1), 1);
        let total: f64 = a.iter().map(|v| v.norm_sqr()).sum();
        assert!((s.lp_norm(2.0).powi(2) - total).abs() < 1e-12 * total);
    }

    #[test]
    fn single_tile_maximal_and_square() {
        let coll = build_tiles(&[cube(1, [2, 5, -9])], (0.0, 0.5)).unwrap();
        let op = ModelOperator::new(&coll, &grid()).unwrap();
        let [f1, ..] = triple(4);
        let a = pairings(&op, &forward_transform(&f1), 1)[0].norm() / 0.5f64.sqrt();
        let m = maximal_op(&op, &f1, 1).unwrap();
        let s = square_op(&op, &f1, 1).unwrap();
        assert_eq!(m.eval(0.25), a);
        assert!((s.eval(0.25) - a).abs() < 1e-15 * a);
        assert_eq!(m.eval(0.6), 0.0);
        assert_eq!(m.eval(-0.1), 0.0);
    }

    #[test]
    fn maximal_operator_is_bounded() {
        let op = mixed();
        let g = grid();
        for p in [1.5, 2.0, 4.0] {
            let ratios: Vec<f64> = (0..50)
                .map(|s| {
                    let f = random_band(&g, 1.5, 13.0, 500 + s, 0);
                    let m = maximal_op(&op, &f, 1).unwrap();
                    m.lp_norm(p) / lp_quasinorm(&f, p, Window::Full).unwrap()
                })
                .collect();
            let fitted = ratios[..10].iter().cloned().fold(0.0, f64::max);
            assert!(ratios.iter().all(|r| *r <= 2.0 * fitted), "{p} {ratios:?}");
        }
    }

    #[test]
    fn additivity_under_enlargement() {
        let op = mixed();
        let small = op.prefix(10);
        let [f1, f2, f3] = triple(8);
        let full = trilinear_form(&op, None, &f1, &f2, &f3).unwrap();
        let part = trilinear_form(&small, None, &f1, &f2, &f3).unwrap();
        let s: Vec<_> = (1..=3).map(|j| pairings(&op, &forward_transform([&f1, &f2, &f3][j - 1]), j)).collect();
        let rest: Complex64 = (10..op.len())
            .map(|i| s[0][i] * s[1][i] * s[2][i] / op.packets(i)[0].interval.length().sqrt())
            .sum();
        assert!((full - part - rest).norm() <= 1e-12 * full.norm());
    }

    #[test]
    fn domination_against_smoothed_indicator() {
        let op = mixed();
        let g = grid();
        // Unit-mass set E' = [-0.3, 0.2] ∪ [1.1, 1.6], edges smoothed over 1/16.
        let edge = |t: f64| 0.5 * (1.0 + (16.0 * t).tanh());
        let chi = SampledFunction::from_real_fn(g, |x| {
            edge(x + 0.3) * edge(0.2 - x) + edge(x - 1.1) * edge(1.6 - x)
        })
        .unwrap();
        let mass: f64 = chi.values().iter().map(|v| v.re).sum::<f64>() * g.spacing();
        assert!((mass - 1.0).abs() < 1e-3);
        for seed in 0..20 {
            let [f1, f2, _] = triple(700 + seed);
            for roles in [Roles::Standard, Roles::Swapped] {
                let d = domination_check(&op, &f1, &f2, &chi, roles).unwrap();
                assert!(d.lhs.is_finite() && d.pass, "{d:?}");
            }
        }
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let op = mixed();
        let [f1, f2, f3] = triple(2);
        let zeros = vec![Complex64::new(0.0, 0.0); op.len()];
        assert_eq!(trilinear_form(&op, Some(&zeros), &f1, &f2, &f3).unwrap(), Complex64::new(0.0, 0.0));
        assert!(trilinear_form(&op, Some(&zeros[1..]), &f1, &f2, &f3).is_err());
    }
}
