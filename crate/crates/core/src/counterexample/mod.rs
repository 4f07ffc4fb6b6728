//! The random-modulation counterexample: boundedness of the bilinear Hilbert
//! transform from `L^∞ × FL^{q0}` into `L^{r0}` forces `q0 ≥ 2`.

pub mod bumps;
pub mod experiment;
pub mod family;
pub mod khinchine;

pub use bumps::{make_bump_pair, BumpPair, DEFAULT_PERIOD};
pub use experiment::{
    contradiction_summary, expectation_experiment, expectation_samples, fl_norm_experiment,
    ContradictionSummary, Verdict,
};
pub use family::{demodulated_profile, make_family, IntervalSystem, RandomFamily};
pub use khinchine::{khinchine_envelope, khinchine_ratio, KhinchineEstimate};
