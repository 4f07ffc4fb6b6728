//! Empirical `L^{p1} × L^{p2} → L^p` ratios of the model operator over cones, slots and nested collections.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::model::{domination_from_pairings, pairings, Domination, ModelOperator, Roles};
use super::tiles::build_tiles;
use crate::decomposition::whitney::{enumerate_keys, WhitneyKey};
use crate::decomposition::{complete_to_cube, FrequencyCube, WhitneyConfig, WhitneySquare};
use crate::error::{LabError, Result};
use crate::grid::{inverse_transform, lp_quasinorm, Grid, Spectrum, Window};
use crate::report::{ScalingReport, ScalingRow};
use crate::stats::stream_rng;

pub const HOLDER_CONES: [u32; 5] = [1, 2, 4, 8, 16];
/// Cube sides `2^l` of every family.
pub const FAMILY_SCALES: [i32; 4] = [0, 1, 2, 3];
/// Tiles restricted to `I ⊆ [−T, T]`.
pub const TIME_WINDOW: f64 = 4.0;
pub const HOLDER_PERIOD: f64 = 32.0;
/// Slots whose family reaches beyond this frequency are skipped.
pub const FREQUENCY_CAP: f64 = 2048.0;
/// Accepted distance of the fitted slopes from zero.
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Nested collection sizes: one, two, three and four scales.
pub const PREFIX_SIZES: [usize; 4] = [8, 24, 56, 120];

/// Cubes of side `2^l`, `l ∈ FAMILY_SCALES`, completed from dilations of one Whitney key.
pub fn key_family(key: WhitneyKey, n: u32, slot: usize) -> Result<Vec<FrequencyCube>> {
    let square = |s: i32| {
        let g = key.at_scale(s);
        WhitneySquare { q1: g.q1, q2: g.q2, cone_index: n, slot }
    };
    let offset = complete_to_cube(&square(0)).scale();
    FAMILY_SCALES
        .iter()
        .map(|&l| {
            let cube = complete_to_cube(&square(-l - offset));
            if cube.scale() != -l {
                return Err(LabError::Domain(format!("key {key:?} changes magnification across scales")));
            }
            Ok(cube)
        })
        .collect()
}

pub fn family_max_frequency(family: &[FrequencyCube]) -> f64 {
    family
        .iter()
        .flat_map(|c| [c.q1, c.q2, c.q3])
        .map(|q| q.lo_f64().abs().max(q.hi_f64().abs()))
        .fold(0.0, f64::max)
}

/// Slots of cone `n` whose family stays below `cap`, with their keys.
pub fn available_slots(n: u32, cap: f64, cfg: &WhitneyConfig) -> Result<Vec<(usize, WhitneyKey)>> {
    let keys = enumerate_keys(n, cfg)?;
    let fits = |slot: usize, key: WhitneyKey| -> bool {
        key_family(key, n, slot).is_ok_and(|f| family_max_frequency(&f) <= cap)
    };
    Ok(keys.into_iter().enumerate().map(|(i, k)| (i + 1, k)).filter(|&(s, k)| fits(s, k)).collect())
}

/// First, middle and last entries, without repeats.
pub fn probe_slots<T: Copy + PartialEq>(available: &[T]) -> Vec<T> {
    if available.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in [0, available.len() / 2, available.len() - 1] {
        if !out.contains(&available[i]) {
            out.push(available[i]);
        }
    }
    out
}

/// Collection and grid for one `(n, slot)` family.
pub fn family_operator(family: &[FrequencyCube]) -> Result<ModelOperator> {
    let coll = build_tiles(family, (-TIME_WINDOW, TIME_WINDOW))?;
    let m = Grid::required_samples(HOLDER_PERIOD, family_max_frequency(family) + 1.0);
    ModelOperator::new(&coll, &Grid::centered(m, HOLDER_PERIOD, 0.0)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderExponents {
    pub p1: f64,
    pub p2: f64,
}

impl HolderExponents {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1.is_finite() && p2.is_finite() && p1 >= 1.0 && p2 >= 1.0) {
            return Err(LabError::Domain(format!("exponents ({p1}, {p2}) must be finite and at least 1")));
        }
        let e = Self { p1, p2 };
        if e.p() <= 0.5 {
            return Err(LabError::Domain(format!("target exponent {} must exceed 1/2", e.p())));
        }
        Ok(e)
    }

    /// `1/p = 1/p1 + 1/p2`.
    pub fn p(&self) -> f64 {
        1.0 / (1.0 / self.p1 + 1.0 / self.p2)
    }
}

/// Tiles per localized ensemble member: one time block of the coarsest collection scale.
pub const BLOCK_TILES: usize = 8;

/// Tiles carrying the random coefficients of ensemble member `member`.
///
/// Even members are Gaussian packet trains on a block of consecutive tiles of one scale,
/// odd members spread over the whole collection. The ratio is invariant under dilation and
/// translation, so localized members probe every collection size alike.
pub fn member_support(op: &ModelOperator, member: u64, rng: &mut impl Rng) -> Vec<usize> {
    if member % 2 == 1 {
        return (0..op.len()).collect();
    }
    let tiles = &op.collection.tiles;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, t) in tiles.iter().enumerate() {
        match runs.last_mut() {
            Some((start, end)) if tiles[*start].interval.l == t.interval.l => *end = i + 1,
            _ => runs.push((i, i + 1)),
        }
    }
    let (start, end) = runs[rng.random_range(0..runs.len())];
    let width = BLOCK_TILES.min(end - start);
    let first = start + rng.random_range(0..=end - start - width);
    (first..first + width).collect()
}

/// `Σ_P g_P Φ^j_P` over `support` with complex Gaussian `g_P`, normalized to unit `L^q`.
fn random_input(op: &ModelOperator, support: &[usize], slot: usize, q: f64, rng: &mut impl Rng) -> Result<Spectrum> {
    let s = packet_sum(op, support, slot, rng)?;
    let norm = lp_quasinorm(&inverse_transform(&s), q, Window::Full)?;
    let coeffs = s.coeffs().iter().map(|c| c / norm).collect();
    Spectrum::new(op.grid, coeffs)
}

/// `max_e ‖Π(f1_e, f2_e)‖_p` over an ensemble with `‖f1_e‖_{p1} = ‖f2_e‖_{p2} = 1`; zero for an empty collection.
pub fn holder_ratio(op: &ModelOperator, exps: HolderExponents, ensemble: usize, seed: u64, stream: u64) -> Result<f64> {
    if op.is_empty() {
        return Ok(0.0);
    }
    let ratios = (0..ensemble)
        .into_par_iter()
        .map(|e| {
            let member = e as u64;
            let mut rng = stream_rng(seed, stream * ensemble as u64 + member);
            let support = member_support(op, member, &mut rng);
            let s1 = random_input(op, &support, 1, exps.p1, &mut rng)?;
            let s2 = random_input(op, &support, 2, exps.p2, &mut rng)?;
            lp_quasinorm(&inverse_transform(&op.apply_spectra(None, &s1, &s2)?), exps.p(), Window::Full)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderRow {
    pub n: u32,
    pub slot: usize,
    pub tiles: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderReport {
    pub exponents: HolderExponents,
    pub rows: Vec<HolderRow>,
    /// Worst ratio per cone against `n`.
    pub versus_n: ScalingReport,
    /// Worst ratio per collection size against the size.
    pub versus_size: ScalingReport,
}

impl HolderReport {
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn slopes_flat(&self) -> bool {
        self.versus_n.slope.abs() <= SLOPE_TOLERANCE && self.versus_size.slope.abs() <= SLOPE_TOLERANCE
    }
}

#[derive(Debug, Clone)]
pub struct HolderSetup {
    pub cones: Vec<u32>,
    /// A fixed slot for every cone, or `None` for the first, middle and last available slots.
    pub slot: Option<usize>,
    pub ensemble: usize,
    pub seed: u64,
    pub config: WhitneyConfig,
}

fn worst_by<K: Copy + PartialEq + Into<f64>>(rows: &[HolderRow], key: fn(&HolderRow) -> K, seed: u64) -> Result<ScalingReport> {
    let mut keys: Vec<K> = Vec::new();
    for r in rows {
        if !keys.contains(&key(r)) {
            keys.push(key(r));
        }
    }
    let out = keys
        .into_iter()
        .map(|k| ScalingRow {
            parameter: k.into(),
            value: rows.iter().filter(|r| key(r) == k).map(|r| r.ratio).fold(0.0, f64::max),
            stderr: 0.0,
        })
        .collect();
    ScalingReport::fit(out, 0.0, seed)
}

/// Slots of cone `n` used by the experiments, with their keys.
pub fn chosen_slots(n: u32, slot: Option<usize>, cfg: &WhitneyConfig) -> Result<Vec<(usize, WhitneyKey)>> {
    let available = available_slots(n, FREQUENCY_CAP, cfg)?;
    let chosen = match slot {
        None => probe_slots(&available),
        Some(k) => available.iter().filter(|(s, _)| *s == k).copied().collect(),
    };
    if chosen.is_empty() {
        return Err(LabError::Domain(match slot {
            None => format!("cone {n} has no slot below the frequency cap {FREQUENCY_CAP}"),
            Some(k) => format!("slot {k} of cone {n} is missing or exceeds the frequency cap {FREQUENCY_CAP}"),
        }));
    }
    Ok(chosen)
}

/// Ratios over cones, probe slots and nested collections, with slopes against `n` and against size.
pub fn empirical_holder_bound(setup: &HolderSetup, exps: HolderExponents) -> Result<HolderReport> {
    if setup.ensemble == 0 {
        return Err(LabError::Domain("ensemble must be nonempty".into()));
    }
    let mut rows = Vec::new();
    for (ci, &n) in setup.cones.iter().enumerate() {
        let slots = chosen_slots(n, setup.slot, &setup.config)?;
        for (si, &(slot, key)) in slots.iter().enumerate() {
            let full = family_operator(&key_family(key, n, slot)?)?;
            for (pi, &size) in PREFIX_SIZES.iter().enumerate() {
                let op = full.prefix(size);
                let stream = ((ci * 3 + si) * PREFIX_SIZES.len() + pi) as u64;
                rows.push(HolderRow { n, slot, tiles: op.len(), ratio: holder_ratio(&op, exps, setup.ensemble, setup.seed, stream)? });
            }
        }
    }
    let versus_n = worst_by(&rows, |r| r.n, setup.seed)?;
    let versus_size = worst_by(&rows, |r| r.tiles as u32, setup.seed)?;
    Ok(HolderReport { exponents: exps, rows, versus_n, versus_size })
}

/// Spectrum of `Σ_P g_P Φ^j_P` over `support`, without normalization.
fn packet_sum(op: &ModelOperator, support: &[usize], slot: usize, rng: &mut impl Rng) -> Result<Spectrum> {
    let mut acc = vec![Complex64::new(0.0, 0.0); op.grid.len()];
    for &i in support {
        let g = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        op.packets(i)[slot - 1].spectrum.accumulate(g, &op.grid, &mut acc);
    }
    Spectrum::new(op.grid, acc)
}

/// `f̂(ξ) ↦ conj(f̂(−ξ))`, so that `∫ f Φ` pairs with a packet sum on `ω`.
fn reflect(s: &Spectrum) -> Result<Spectrum> {
    let g = *s.grid();
    let coeffs = (0..g.len()).map(|i| s.at_index(-g.frequency_index(i)).conj()).collect();
    Spectrum::new(g, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationSummary {
    pub triples: usize,
    /// The triple with the largest `lhs / rhs`.
    pub worst: Domination,
    pub all_pass: bool,
}

impl DominationSummary {
    pub fn worst_ratio(&self) -> f64 {
        self.worst.lhs / self.worst.rhs
    }
}

/// Domination check on random packet-sum triples, localized and global as in the Hölder ensemble.
pub fn domination_suite(op: &ModelOperator, roles: Roles, triples: usize, seed: u64, stream: u64) -> Result<DominationSummary> {
    if op.is_empty() || triples == 0 {
        return Err(LabError::Domain("domination suite needs tiles and triples".into()));
    }
    let checks = (0..triples)
        .into_par_iter()
        .map(|t| {
            let member = t as u64;
            let mut rng = stream_rng(seed, stream * triples as u64 + member);
            let support = member_support(op, member, &mut rng);
            let s1 = packet_sum(op, &support, 1, &mut rng)?;
            let s2 = packet_sum(op, &support, 2, &mut rng)?;
            let s3 = reflect(&packet_sum(op, &support, 3, &mut rng)?)?;
            let a = [pairings(op, &s1, 1), pairings(op, &s2, 2), pairings(op, &s3, 3)];
            Ok(domination_from_pairings(op, [&a[0], &a[1], &a[2]], roles))
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = checks.iter().all(|d| d.pass);
    let worst = *checks
        .iter()
        .max_by(|a, b| (a.lhs / a.rhs).total_cmp(&(b.lhs / b.rhs)))
        .expect("at least one triple");
    Ok(DominationSummary { triples, worst, all_pass })
}

/// Roles used for cone `n`: the first cone swaps the maximal operator onto the third function.
pub fn roles_for(n: u32) -> Roles {
    if n == 1 {
        Roles::Swapped
    } else {
        Roles::Standard
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::coefficients::{fourier_coefficients, neighbouring_cones, DEFAULT_NODES};
    use crate::decomposition::PartitionOfUnity;
    use crate::multiplier::Symbol;

    fn first_family(n: u32) -> (usize, Vec<FrequencyCube>) {
        let (slot, key) = available_slots(n, FREQUENCY_CAP, &WhitneyConfig::default()).unwrap()[0];
        (slot, key_family(key, n, slot).unwrap())
    }

    #[test]
    fn families_are_dilations() {
        let (_, fam) = first_family(2);
        let sides: Vec<f64> = fam.iter().map(|c| c.side()).collect();
        assert_eq!(sides, vec![1.0, 2.0, 4.0, 8.0]);
        let mag = fam[0].magnification();
        for c in &fam {
            assert_eq!(c.magnification(), mag);
            assert!(c.containment_holds());
            let ratio = c.q3.lo_f64() / fam[0].q3.lo_f64();
            assert_eq!(ratio, c.side());
        }
        let coll = build_tiles(&fam, (-TIME_WINDOW, TIME_WINDOW)).unwrap();
        assert_eq!(coll.len(), *PREFIX_SIZES.last().unwrap());
    }

    #[test]
    fn domination_suite_passes_and_finds_pairings() {
        let (_, fam) = first_family(3);
        let op = family_operator(&fam).unwrap();
        for roles in [Roles::Standard, Roles::Swapped] {
            let d = domination_suite(&op, roles, 200, 4, 0).unwrap();
            assert!(d.all_pass && d.worst.lhs > 0.0 && d.worst_ratio() <= 1.0 + 1e-8, "{d:?}");
        }
        let single = op.prefix(1);
        let d = domination_suite(&single, Roles::Standard, 10, 4, 1).unwrap();
        assert!((d.worst.lhs - d.worst.rhs).abs() <= 1e-12 * d.worst.rhs);
    }

    #[test]
    fn exponents_validated() {
        assert_eq!(HolderExponents::new(2.0, 2.0).unwrap().p(), 1.0);
        assert!((HolderExponents::new(1.2, 1.2).unwrap().p() - 0.6).abs() < 1e-15);
        assert!(HolderExponents::new(1.0, 1.0).is_err());
        assert!(HolderExponents::new(0.9, 4.0).is_err());
        assert!(HolderExponents::new(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn probe_slots_dedup() {
        assert_eq!(probe_slots(&[7]), vec![7]);
        assert_eq!(probe_slots(&[1, 2]), vec![1, 2]);
        assert_eq!(probe_slots(&[1, 2, 3, 4, 5]), vec![1, 3, 5]);
        assert!(probe_slots::<u8>(&[]).is_empty());
    }

    #[test]
    fn empty_collection_ratio_is_zero() {
        let (_, fam) = first_family(1);
        let op = family_operator(&fam).unwrap().prefix(0);
        let e = HolderExponents::new(2.0, 2.0).unwrap();
        assert_eq!(holder_ratio(&op, e, 4, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn localized_members_stay_on_one_scale() {
        let (_, fam) = first_family(1);
        let op = family_operator(&fam).unwrap();
        let mut rng = stream_rng(5, 0);
        for member in 0..40 {
            let s = member_support(&op, member, &mut rng);
            if member % 2 == 1 {
                assert_eq!(s.len(), op.len());
            } else {
                assert_eq!(s.len(), BLOCK_TILES);
                let l = op.collection.tiles[s[0]].interval.l;
                assert!(s.iter().all(|&i| op.collection.tiles[i].interval.l == l));
                assert!(s.windows(2).all(|w| w[1] == w[0] + 1));
            }
        }
    }

    #[test]
    fn symbol_coefficients_scale_the_operator() {
        let n = 2;
        let (slot, fam) = first_family(n);
        let op = family_operator(&fam).unwrap();
        let pu = PartitionOfUnity::from_cones(neighbouring_cones(n), WhitneyConfig::default());
        let m = Symbol::exp_decay(1.0);
        let per_cube: Vec<Complex64> = fam
            .iter()
            .map(|c| fourier_coefficients(&m, c, &pu.bump(c.source), 0, DEFAULT_NODES).unwrap().get(0, 0, 0))
            .collect();
        assert!(fam.iter().all(|c| c.source.slot == slot));
        let coeffs: Vec<Complex64> = op
            .collection
            .tiles
            .iter()
            .map(|t| per_cube[fam.iter().position(|c| c.scale() == t.cube.scale()).unwrap()])
            .collect();
        let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(cmax > 0.0);
        let e = HolderExponents::new(2.0, 2.0).unwrap();
        for member in 0..8 {
            let mut rng = stream_rng(17, member);
            let support = member_support(&op, member, &mut rng);
            let s1 = random_input(&op, &support, 1, e.p1, &mut rng).unwrap();
            let s2 = random_input(&op, &support, 2, e.p2, &mut rng).unwrap();
            let norm = |c: Option<&[Complex64]>| {
                let out = inverse_transform(&op.apply_spectra(c, &s1, &s2).unwrap());
                lp_quasinorm(&out, e.p(), Window::Full).unwrap()
            };
            let r = norm(Some(&coeffs)) / (cmax * norm(None));
            assert!((1.0 / 3.0..=3.0).contains(&r), "member {member}: {r}");
        }
    }
}
