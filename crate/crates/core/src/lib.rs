//! Symmetry groups `S` and reversing symmetry groups `R` of toral
//! automorphisms, substitution subshifts and planar shifts, computed in exact
//! arithmetic with bounded exhaustive searches.

pub mod algebra;
pub mod error;
pub mod group;
pub mod multidim;
pub mod num_serde;
pub mod subshift;
pub mod toral;
pub mod trace_map;

pub use error::{Error, Result};
