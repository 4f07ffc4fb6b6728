//! Numerical laboratory for bilinear Fourier multipliers whose symbols are
//! singular along the line `ξ1 = ξ2`, with the bilinear Hilbert transform as the
//! model case.

// `!(x <= limit)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod cli;
pub mod counterexample;
pub mod decomposition;
pub mod grid;
pub mod multiplier;
pub mod parallel;
pub mod paraproduct;
pub mod quadrature;
pub mod report;
pub mod stats;

pub use error::{LabError, Result};
