//! Tri-tiles: a dyadic time interval paired with the three frequency intervals of a cube.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::decomposition::FrequencyCube;
use crate::error::{LabError, Result};
use crate::report::fmt_float;

/// `I = 2^{−l}[m, m + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicTime {
    pub l: i32,
    pub m: i64,
}

impl DyadicTime {
    pub fn length(&self) -> f64 {
        2f64.powi(-self.l)
    }

    pub fn lo(&self) -> f64 {
        self.m as f64 * self.length()
    }

    pub fn hi(&self) -> f64 {
        (self.m + 1) as f64 * self.length()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x < self.hi()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriTile {
    pub interval: DyadicTime,
    /// Closed frequency intervals `ω1, ω2, ω3`.
    pub omega: [(f64, f64); 3],
    pub cube: FrequencyCube,
}

impl TriTile {
    pub fn omega_length(&self, j: usize) -> f64 {
        self.omega[j].1 - self.omega[j].0
    }

    /// `|I| · |ω_j|` for each slot.
    pub fn areas(&self) -> [f64; 3] {
        [0, 1, 2].map(|j| self.interval.length() * self.omega_length(j))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TileCollection {
    pub tiles: Vec<TriTile>,
    pub window: (f64, f64),
}

impl TileCollection {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// The first `count` tiles, which form a sub-collection.
    pub fn prefix(&self, count: usize) -> Self {
        Self { tiles: self.tiles[..count.min(self.tiles.len())].to_vec(), window: self.window }
    }

    /// Largest modulus over all frequency intervals.
    pub fn max_frequency(&self) -> f64 {
        self.tiles
            .iter()
            .flat_map(|t| t.omega.iter().map(|&(a, b)| a.abs().max(b.abs())))
            .fold(0.0, f64::max)
    }

    /// Sorted distinct endpoints of the time intervals.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.tiles.iter().flat_map(|t| [t.interval.lo(), t.interval.hi()]).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// CSV rows `l,m,w1lo,w1hi,w2lo,w2hi,w3lo,w3hi` without header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for t in &self.tiles {
            let _ = write!(out, "{},{}", t.interval.l, t.interval.m);
            for (a, b) in t.omega {
                let _ = write!(out, ",{},{}", fmt_float(a), fmt_float(b));
            }
            out.push('\n');
        }
        out
    }
}

pub const TILE_CSV_HEADER: &str = "l,m,w1lo,w1hi,w2lo,w2hi,w3lo,w3hi";

/// Tiles `2^{−l}[m, m+1) ⊆ [lo, hi)` for every cube, where `2^l = ℓ(Q)`; coarse scales first.
pub fn build_tiles(family: &[FrequencyCube], window: (f64, f64)) -> Result<TileCollection> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(LabError::EmptyWindow { lo, hi });
    }
    if family.is_empty() {
        return Err(LabError::Domain("tile family is empty".into()));
    }
    let mut cubes = family.to_vec();
    cubes.sort_by_key(|c| std::cmp::Reverse(c.scale()));
    let mut seen = HashSet::new();
    let mut tiles = Vec::new();
    for cube in cubes {
        let l = -cube.scale();
        if !seen.insert(l) {
            return Err(LabError::Domain(format!("two cubes share the scale 2^{l}")));
        }
        let len = 2f64.powi(-l);
        let first = (lo / len).ceil() as i64;
        let last = (hi / len).floor() as i64 - 1;
        let omega = [cube.q1, cube.q2, cube.q3].map(|q| (q.lo_f64(), q.hi_f64()));
        for m in first..=last {
            tiles.push(TriTile { interval: DyadicTime { l, m }, omega, cube });
        }
    }
    Ok(TileCollection { tiles, window })
}
