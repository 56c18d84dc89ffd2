//! Exact integer and polynomial arithmetic.

pub mod factor;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod sturm;

pub use factor::{factor_over_z, factor_over_z_with_cap, is_irreducible};
pub use lattice::{hermite_normal_form, integer_kernel};
pub use matrix::IntMatrix;
pub use poly::IntPolynomial;
pub use sturm::{root_signature, RootSignature};

/// `det(x·1 − M)`.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    IntPolynomial::char_poly(m)
}

pub fn companion_matrix(p: &IntPolynomial) -> crate::Result<IntMatrix> {
    p.companion_matrix()
}

pub fn is_self_reciprocal(p: &IntPolynomial, det: &num_bigint::BigInt) -> crate::Result<bool> {
    p.is_self_reciprocal(det)
}
