//! Randomized checks of the structural invariants across modules.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use bht_lab::counterexample::khinchine::khinchine_envelope;
use bht_lab::counterexample::IntervalSystem;
use bht_lab::decomposition::dyadic::pow2_neg;
use bht_lab::decomposition::{complete_to_cube, whitney_cover, Shift, ShiftedDyadicInterval, WhitneyConfig};
use bht_lab::grid::{flp_norm, forward_transform, inverse_transform, lp_quasinorm, Grid, SampledFunction, Spectrum, Window};
use bht_lab::paraproduct::holder::{chosen_slots, family_operator, key_family};
use bht_lab::paraproduct::{model_apply, trilinear_form};
use common::exact_khinchine_ratio;

fn shift() -> impl Strategy<Value = Shift> {
    prop_oneof![Just(Shift::Zero), Just(Shift::PlusThird), Just(Shift::MinusThird)]
}

fn samples(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), m)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_round_trip(log_m in 3u32..11, x0 in -5.0..5.0f64, seed in any::<u64>()) {
        let m = 1usize << log_m;
        let grid = Grid::new(m, 8.0, x0).unwrap();
        let vals: Vec<Complex64> = (0..m)
            .map(|j| {
                let t = (seed.wrapping_mul(j as u64 + 1) % 1000) as f64 / 500.0 - 1.0;
                Complex64::new(t, (j as f64).sin())
            })
            .collect();
        let f = SampledFunction::new(grid, vals).unwrap();
        let back = inverse_transform(&forward_transform(&f));
        let err: f64 = f.values().iter().zip(back.values()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let norm: f64 = f.values().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-12 * norm);
    }

    #[test]
    fn lp_is_absolutely_homogeneous(vals in samples(64), p in 0.2..4.0f64, cr in -3.0..3.0f64, ci in -3.0..3.0f64) {
        let f = SampledFunction::new(Grid::centered(64, 4.0, 0.0).unwrap(), vals).unwrap();
        let c = Complex64::new(cr, ci);
        prop_assume!(c.norm() > 1e-6);
        let lhs = lp_quasinorm(&f.scale(c), p, Window::Full).unwrap();
        let rhs = c.norm() * lp_quasinorm(&f, p, Window::Full).unwrap();
        prop_assert!(relative(lhs, rhs) <= 1e-12);
    }

    #[test]
    fn parseval(coeffs in samples(15)) {
        let grid = Grid::centered(128, 16.0, 0.5).unwrap();
        let mut spec = vec![Complex64::new(0.0, 0.0); 128];
        for (k, c) in coeffs.iter().enumerate() {
            spec[grid.slot_of(k as i64 - 7).unwrap()] = *c;
        }
        let f = inverse_transform(&Spectrum::new(grid, spec).unwrap());
        let lhs = lp_quasinorm(&f, 2.0, Window::Full).unwrap();
        let rhs = flp_norm(&f, 2.0).unwrap();
        prop_assert!(relative(lhs, rhs) <= 1e-10);
    }

    #[test]
    fn interval_system_geometry(n in 1usize..400) {
        let sys = IntervalSystem::new(n).unwrap();
        prop_assert_eq!(sys.intervals.len(), 2 * n);
        // Each of the 2N differences near 1/2 rounds by at most one ulp.
        prop_assert!((sys.total_measure() - 1.0 / 16.0).abs() <= 2.0 * n as f64 * f64::EPSILON);
        for w in sys.intervals.windows(2) {
            prop_assert!(w[0].2 < w[1].1);
        }
        for &(_, lo, hi) in &sys.intervals {
            prop_assert!(lo >= 0.25 && hi <= 0.75);
            prop_assert!(((hi - lo) - 1.0 / (32.0 * n as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn dyadic_arithmetic_is_exact(k in -30i32..30, i in -1000i64..1000, j in -1000i64..1000, s in shift()) {
        let a = ShiftedDyadicInterval::new(k, i, s);
        let b = ShiftedDyadicInterval::new(k, j, s);
        prop_assert_eq!(a.length(), pow2_neg(k));
        prop_assert_eq!(a.hi() - a.lo(), a.length());
        let disjoint = a.hi() <= b.lo() || b.hi() <= a.lo();
        prop_assert!(disjoint || a == b);
        prop_assert_eq!(a == b, i == j);
    }

    #[test]
    fn exact_khinchine_ratio_lies_in_the_envelope(a in prop::collection::vec(0.01..10.0f64, 1..11), r in 0.2..1.99f64) {
        let (lo, hi) = khinchine_envelope(r);
        let exact = exact_khinchine_ratio(&a, r);
        prop_assert!(exact >= lo * (1.0 - 1e-12) && exact <= hi * (1.0 + 1e-12), "ratio {} outside [{}, {}]", exact, lo, hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cover_squares_are_valid_and_complete(n in 1u32..6, pick in any::<prop::sample::Index>()) {
        let cfg = WhitneyConfig::default();
        let cover = whitney_cover(n, (1.0, 4.0), &cfg).unwrap();
        prop_assume!(!cover.squares.is_empty());
        let sq = cover.squares[pick.index(cover.squares.len())];
        prop_assert!(sq.invariants_hold(&cfg));
        let cube = complete_to_cube(&sq);
        prop_assert!(cube.containment_holds());
        prop_assert!(cube.q1.length() == cube.q2.length() && cube.q2.length() == cube.q3.length());
    }

    #[test]
    fn heisenberg_area_and_duality(n in prop::sample::select(vec![1u32, 2, 4]), seed in any::<u64>()) {
        let cfg = WhitneyConfig::default();
        let (slot, key) = chosen_slots(n, None, &cfg).unwrap()[0];
        let op = family_operator(&key_family(key, n, slot).unwrap()).unwrap();
        for t in &op.collection.tiles {
            for area in t.areas() {
                prop_assert!((area - 1.0).abs() < 1e-15);
            }
        }
        let grid = op.grid;
        let random = |stream: u64, reflect: bool| {
            let s = Spectrum::from_fn(grid, |xi| {
                let xi = if reflect { -xi } else { xi };
                let h = (xi * 7.3 + (seed ^ stream) as f64 * 1e-9).sin();
                Complex64::new(h, h * 0.5) * (-(xi / 40.0).powi(2)).exp()
            })
            .unwrap();
            inverse_transform(&s)
        };
        let (f1, f2, f3) = (random(1, false), random(2, false), random(3, true));
        let lam = trilinear_form(&op, None, &f1, &f2, &f3).unwrap();
        let pi = model_apply(&op, None, &f1, &f2).unwrap();
        let integral: Complex64 = pi.values().iter().zip(f3.values()).map(|(a, b)| a * b).sum::<Complex64>() * grid.spacing();
        prop_assert!((lam - integral).norm() <= 1e-8 * lam.norm().max(1e-300));
    }
}
