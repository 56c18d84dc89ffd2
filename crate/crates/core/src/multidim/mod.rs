//! Extended symmetries of `Z²`-shifts, checked on finite patches.

pub mod block;
pub mod ledrappier;
pub mod patch;
pub mod visible;

pub use block::{block_substitution_patch, chair_seed, dihedral_d4, verify_point_symmetry, BlockSubstitution2D};
pub use ledrappier::{
    d3_elements, d3_generators, ledrappier_count, ledrappier_patches, ledrappier_valid, ledrappier_valid_sparse,
    verify_lattice_symmetry, verify_ledrappier_symmetry, LatticeSymmetryReport,
};
pub use patch::{LatticeMap, Patch2D, Point, SparsePatch};
pub use visible::{
    density_convergence, find_hole, gl_invariance_check, is_visible, random_gl2_product, visible_density,
    visible_points, DensityReport, HoleReport, InvarianceReport, Window,
};
