//! Trivariate bicycle QLDPC codes: construction from polynomial specs,
//! parameter and distance computation, Tanner-graph layout analysis
//! (toric, tangled, bi-planar), BP+OSD decoding under depolarizing noise,
//! and search over the specification space.

pub mod cli;
pub mod code;
pub mod decoder;
pub mod distance;
pub mod gf2;
pub mod layout;
pub mod search;
pub mod sim;
pub mod tables;
