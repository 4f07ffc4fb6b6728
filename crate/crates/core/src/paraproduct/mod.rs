//! Discrete model paraproducts over tri-tile collections: wave packets, the model
//! operator, the maximal and square operators, and the trilinear form.

pub mod holder;
pub mod model;
pub mod packets;
pub mod tiles;

pub use packets::{make_wave_packet, WavePacket};
pub use tiles::{build_tiles, DyadicTime, TileCollection, TriTile};
pub use model::{
    domination_check, domination_from_pairings, maximal_op, model_apply, pairings, square_op, trilinear_form,
    Domination, ModelOperator, PiecewiseConstant, Roles,
};
pub use holder::{
    domination_suite, empirical_holder_bound, DominationSummary, HolderExponents, HolderReport, HolderSetup,
};
