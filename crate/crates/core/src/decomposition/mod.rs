//! Cone decomposition of the region `{ξ2 > |ξ1|}`, Whitney covers, the smooth
//! partition of unity, frequency cubes, and Fourier coefficients of localized symbols.

pub mod coefficients;
pub mod cones;
pub mod cube;
pub mod dyadic;
pub mod partition;
pub mod tiling;
pub mod whitney;

pub use cones::{borderline, cone_index};
pub use dyadic::{Shift, ShiftedDyadicInterval};
pub use whitney::{subcollection, whitney_cover, WhitneyConfig, WhitneyCover, WhitneySquare};
pub use cube::{complete_to_cube, FrequencyCube};
pub use partition::{PartitionBump, PartitionOfUnity};
pub use coefficients::{coefficient_decay_report, fourier_coefficients, CoefficientDecayReport, FourierCoefficient};
pub use tiling::{tiling_check, TilingCheck};
