//! Symmetries and reversing symmetries of toral automorphisms `M ∈ GL(d, Z)`.

pub mod commutant;
pub mod pell;
pub mod reversors;
pub mod verdict;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};
use crate::group::ElementOrder;

pub use commutant::{centralizer_units_2d, commutant_basis, pell_cross_check};
pub use pell::{order_fundamental_unit, pell_fundamental_unit, PellSolution};
pub use reversors::find_example_of_type;
pub use reversors::{classify_reversing_group_2d, find_reversors_2d, is_reversor, ReversorSearchResult};
pub use verdict::{
    reversibility_verdict, reversor_power_reduction, unit_group_signature, UnitSignature, Verdict, VerdictKind,
};

/// Largest finite order of an element of `GL(2, Z)`.
pub const GL2_FINITE_ORDER_CAP: u32 = 12;

/// Upper limit on lattice points visited by one coefficient scan.
pub const SCAN_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum MatrixRole {
    /// Generator of the free part of the centralizer.
    Generator,
    Torsion,
    /// `H·M·H⁻¹ = sign·M⁻¹`
    Reversor {
        sign: i8,
    },
}

/// A matrix together with the role it plays for some subject `M`.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixWitness {
    #[serde(flatten)]
    pub role: MatrixRole,
    pub order: ElementOrder,
    pub matrix: IntMatrix,
}

/// Accepts a 2×2 unimodular matrix of infinite order.
pub fn check_infinite_order_2d(m: &IntMatrix) -> Result<()> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: m.dim() });
    }
    let det = m.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    match m.order(GL2_FINITE_ORDER_CAP) {
        Some(k) => Err(Error::FiniteOrder(k)),
        None => Ok(()),
    }
}

/// All integer vectors in `[-bound, bound]^rank`, in lexicographic order,
/// truncated to [`SCAN_BUDGET`] points. The flag is false when truncated.
pub(crate) fn coefficient_box(rank: usize, bound: u64) -> (Box<dyn Iterator<Item = Vec<BigInt>>>, bool) {
    let side = 2 * bound + 1;
    let total = (0..rank).try_fold(1u64, |acc, _| acc.checked_mul(side));
    let exhausted = total.is_some_and(|t| t <= SCAN_BUDGET);
    let limit = total.unwrap_or(u64::MAX).min(SCAN_BUDGET);
    let b = bound as i64;
    let iter = (0..limit).map(move |mut idx| {
        let mut v = vec![BigInt::from(0); rank];
        for slot in v.iter_mut().rev() {
            *slot = BigInt::from((idx % side) as i64 - b);
            idx /= side;
        }
        v
    });
    (Box::new(iter), exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_enumeration() {
        let (it, done) = coefficient_box(2, 1);
        let pts: Vec<Vec<BigInt>> = it.collect();
        assert!(done);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![BigInt::from(-1), BigInt::from(-1)]);
        assert_eq!(pts[8], vec![BigInt::from(1), BigInt::from(1)]);
        let (_, done) = coefficient_box(4, 1000);
        assert!(!done);
    }

    #[test]
    fn infinite_order_check() {
        assert!(check_infinite_order_2d(&IntMatrix::from_i64([[2, 1], [1, 1]])).is_ok());
        assert_eq!(check_infinite_order_2d(&IntMatrix::from_i64([[0, -1], [1, 1]])), Err(Error::FiniteOrder(6)));
        assert!(matches!(check_infinite_order_2d(&IntMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }
}
