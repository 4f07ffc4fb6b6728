//! Shifted dyadic intervals `2^{−k}[j + α, j + 1 + α]`, `α ∈ {0, 1/3, −1/3}`, with exact endpoints.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

/// Shift class `α`; the declaration order is the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    Zero,
    PlusThird,
    MinusThird,
}

impl Shift {
    pub const ALL: [Shift; 3] = [Shift::Zero, Shift::PlusThird, Shift::MinusThird];

    /// `3α`.
    pub fn thirds(self) -> i128 {
        match self {
            Shift::Zero => 0,
            Shift::PlusThird => 1,
            Shift::MinusThird => -1,
        }
    }

    pub fn value(self) -> f64 {
        self.thirds() as f64 / 3.0
    }

    pub fn exact(self) -> Q {
        Q::new(self.thirds(), 3)
    }

    /// Label used in dumps: `0`, `1/3`, `-1/3`.
    pub fn label(self) -> &'static str {
        match self {
            Shift::Zero => "0",
            Shift::PlusThird => "1/3",
            Shift::MinusThird => "-1/3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedDyadicInterval {
    pub scale: i32,
    pub index: i64,
    pub shift: Shift,
}

/// `2^{−k}` as an exact rational.
pub fn pow2_neg(k: i32) -> Q {
    if k >= 0 {
        Q::new(1, 1i128 << k)
    } else {
        Q::from_integer(1i128 << (-k))
    }
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl ShiftedDyadicInterval {
    pub fn new(scale: i32, index: i64, shift: Shift) -> Self {
        assert!((-60..=60).contains(&scale), "scale {scale} outside the exact range");
        Self { scale, index, shift }
    }

    /// The interval of scale `k` and shift `shift` containing `x` (left-closed).
    pub fn containing(scale: i32, shift: Shift, x: f64) -> Self {
        let j = (x * 2f64.powi(scale) - shift.value()).floor();
        Self::new(scale, j as i64, shift)
    }

    pub fn length(&self) -> Q {
        pow2_neg(self.scale)
    }

    pub fn lo(&self) -> Q {
        (Q::from_integer(self.index as i128) + self.shift.exact()) * self.length()
    }

    pub fn hi(&self) -> Q {
        self.lo() + self.length()
    }

    pub fn center(&self) -> Q {
        self.lo() + self.length() / Q::from_integer(2)
    }

    /// `(c − λ|I|/2, c + λ|I|/2)` for the dilation factor `λ = num/den`.
    pub fn dilate(&self, num: i128, den: i128) -> (Q, Q) {
        let half = self.length() * Q::new(num, 2 * den);
        let c = self.center();
        (c - half, c + half)
    }

    pub fn length_f64(&self) -> f64 {
        2f64.powi(-self.scale)
    }

    pub fn lo_f64(&self) -> f64 {
        (self.index as f64 + self.shift.value()) * self.length_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.lo_f64() + self.length_f64()
    }

    pub fn center_f64(&self) -> f64 {
        self.lo_f64() + 0.5 * self.length_f64()
    }

    /// Whether `x` lies in the closed dilate `λ I`.
    pub fn dilate_contains(&self, lambda: f64, x: f64) -> bool {
        (x - self.center_f64()).abs() <= 0.5 * lambda * self.length_f64()
    }

    pub fn exact_bounds_f64(&self) -> (f64, f64) {
        (to_f64(self.lo()), to_f64(self.hi()))
    }

    /// Exact containment of `[a, b]` in the dilate `λ I`.
    pub fn dilate_contains_interval(&self, num: i128, den: i128, a: Q, b: Q) -> bool {
        let (lo, hi) = self.dilate(num, den);
        lo <= a && b <= hi
    }

    /// Same interval one scale coarser or finer keeps `(index, shift)`, so the key is scale free.
    pub fn at_scale(&self, scale: i32) -> Self {
        Self::new(scale, self.index, self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_is_exact() {
        for k in -6..=6 {
            for s in Shift::ALL {
                let i = ShiftedDyadicInterval::new(k, -3, s);
                assert_eq!(i.hi() - i.lo(), pow2_neg(k));
            }
        }
        let i = ShiftedDyadicInterval::new(0, 1, Shift::Zero);
        assert_eq!((i.lo(), i.hi()), (Q::from_integer(1), Q::from_integer(2)));
        let t = ShiftedDyadicInterval::new(2, 0, Shift::PlusThird);
        assert_eq!(t.lo(), Q::new(1, 12));
    }

    #[test]
    fn same_class_intervals_are_disjoint_or_equal() {
        for k in -6..=6 {
            for s in Shift::ALL {
                for j1 in -5i64..5 {
                    for j2 in -5i64..5 {
                        let a = ShiftedDyadicInterval::new(k, j1, s);
                        let b = ShiftedDyadicInterval::new(k, j2, s);
                        let overlap = a.lo().max(b.lo()) < a.hi().min(b.hi());
                        assert_eq!(overlap, a == b);
                    }
                }
            }
        }
    }

    #[test]
    fn containing_finds_the_interval() {
        for &x in &[-3.7, -0.01, 0.0, 0.2, 5.5, 17.25] {
            for k in -3..=5 {
                for s in Shift::ALL {
                    let i = ShiftedDyadicInterval::containing(k, s, x);
                    assert!(i.lo_f64() <= x && x < i.hi_f64(), "{x} {k} {s:?}");
                }
            }
        }
    }

    #[test]
    fn dilation_is_centred() {
        let i = ShiftedDyadicInterval::new(0, 1, Shift::Zero);
        assert_eq!(i.dilate(7, 10), (Q::new(115, 100), Q::new(185, 100)));
        assert!(i.dilate_contains(0.7, 1.5) && !i.dilate_contains(0.7, 1.1));
    }
}
