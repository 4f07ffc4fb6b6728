//! Completion of a Whitney square to a frequency cube `Q1 × Q2 × Q3`.

use super::dyadic::{Shift, ShiftedDyadicInterval, Q};
use super::whitney::WhitneySquare;

/// Coarsening steps tried when searching for `Q3`: `ℓ, 2ℓ, 4ℓ, 8ℓ`.
pub const MAX_COARSENING: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrequencyCube {
    /// `Q1`, `Q2` enlarged to the common length and containing the source sides in their `7/10` cores.
    pub q1: ShiftedDyadicInterval,
    pub q2: ShiftedDyadicInterval,
    pub q3: ShiftedDyadicInterval,
    pub source: WhitneySquare,
}

impl FrequencyCube {
    /// Common side `ℓ(Q)`.
    pub fn side(&self) -> f64 {
        self.q3.length_f64()
    }

    pub fn scale(&self) -> i32 {
        self.q3.scale
    }

    /// `|Q3| / |source side|`.
    pub fn magnification(&self) -> u32 {
        1 << (self.source.scale() - self.q3.scale)
    }

    /// The sum set `−(9/10)Q1 − (9/10)Q2` of the source sides.
    pub fn sum_set(&self) -> (Q, Q) {
        sum_set(&self.source)
    }

    /// Exact check of every containment the completion promises.
    pub fn containment_holds(&self) -> bool {
        let (a, b) = self.sum_set();
        let same = self.q1.scale == self.q3.scale && self.q2.scale == self.q3.scale;
        same && self.q3.dilate_contains_interval(7, 10, a, b)
            && self.q1.dilate_contains_interval(7, 10, self.source.q1.lo(), self.source.q1.hi())
            && self.q2.dilate_contains_interval(7, 10, self.source.q2.lo(), self.source.q2.hi())
    }
}

fn sum_set(sq: &WhitneySquare) -> (Q, Q) {
    let nine = Q::new(9, 10);
    (-nine * (sq.q1.hi() + sq.q2.hi()), -nine * (sq.q1.lo() + sq.q2.lo()))
}

/// First interval of `scale` (shift order, then smallest index) with `[a, b]` in its `7/10` core.
pub fn core_container(scale: i32, a: Q, b: Q) -> Option<ShiftedDyadicInterval> {
    let len = super::dyadic::pow2_neg(scale);
    let half_core = len * Q::new(7, 20);
    let half = Q::new(1, 2);
    for shift in Shift::ALL {
        let lo_j = (b - half_core) / len - shift.exact() - half;
        let hi_j = (a + half_core) / len - shift.exact() - half;
        let j = lo_j.ceil();
        if j <= hi_j {
            let cand = ShiftedDyadicInterval::new(scale, j.to_integer() as i64, shift);
            debug_assert!(cand.dilate_contains_interval(7, 10, a, b));
            return Some(cand);
        }
    }
    None
}

pub fn complete_to_cube(square: &WhitneySquare) -> FrequencyCube {
    let (a, b) = sum_set(square);
    let k = square.scale();
    let q3 = (0..=MAX_COARSENING)
        .find_map(|step| core_container(k - step, a, b))
        .expect("a containing interval exists within eight times the side");
    let widen = |q: ShiftedDyadicInterval| {
        core_container(q3.scale, q.lo(), q.hi()).expect("every shift class leaves room for the side")
    };
    FrequencyCube { q1: widen(square.q1), q2: widen(square.q2), q3, source: *square }
}
