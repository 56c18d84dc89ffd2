use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::pell::order_fundamental_unit;
use super::{check_infinite_order_2d, coefficient_box, MatrixRole, MatrixWitness};
use crate::algebra::{integer_kernel, IntMatrix};
use crate::error::{Error, Result};
use crate::group::{ElementOrder, Extension, GroupPresentation, Qualifier};

/// Z-basis of `{ G ∈ Mat(d, Z) : MG = GM }`, in Hermite normal form of the
/// row-major vectorization.
pub fn commutant_basis(m: &IntMatrix) -> Vec<IntMatrix> {
    let d = m.dim();
    // unknowns g_{ik} at index i*d + k; equation (i, j): (MG − GM)_{ij} = 0
    let mut system = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut row = vec![BigInt::zero(); d * d];
            for k in 0..d {
                row[k * d + j] += m.get(i, k);
                row[i * d + k] -= m.get(k, j);
            }
            system.push(row);
        }
    }
    integer_kernel(&system, d * d).into_iter().map(|v| IntMatrix::from_flat(d, v).expect("d*d entries")).collect()
}

/// Ordering used to pick canonical generators: smaller height first, then
/// lexicographically larger entries.
pub(crate) fn height_key(g: &IntMatrix) -> (BigInt, std::cmp::Reverse<Vec<BigInt>>) {
    (g.height(), std::cmp::Reverse(g.entries().to_vec()))
}

/// Centralizer of an infinite-order `M ∈ GL(2, Z)`: always `{±I} × ⟨G⟩`.
///
/// Scans the commutant lattice with coefficients in `[-bound, bound]` for
/// unimodular points and returns the non-torsion unit of least height as the
/// generator. Every other unit met in the scan is checked to be `±G^n`.
pub fn centralizer_units_2d(m: &IntMatrix, bound: u64) -> Result<GroupPresentation<MatrixWitness>> {
    check_infinite_order_2d(m)?;
    let basis = commutant_basis(m);
    let (coeffs, exhausted) = coefficient_box(basis.len(), bound);
    let id = IntMatrix::identity(2);
    let minus_id = -&id;

    let mut units: Vec<IntMatrix> =
        coeffs.map(|c| combine(&basis, &c)).filter(|g| g.det().abs().is_one() && *g != id && *g != minus_id).collect();
    units.sort_by_key(height_key);
    let generator =
        units.first().cloned().ok_or_else(|| Error::Invariant(format!("no non-torsion unit within bound {bound}")))?;
    for u in &units {
        if !is_signed_power(u, &generator) {
            return Err(Error::Invariant(format!(
                "unit {u} is not a signed power of the candidate generator {generator}"
            )));
        }
    }

    let subject = m.clone();
    GroupPresentation::new(
        "C₂ × C∞",
        "{±I}",
        1,
        Extension::None,
        BTreeSet::new(),
        vec![
            MatrixWitness { role: MatrixRole::Generator, order: ElementOrder::Infinite, matrix: generator },
            MatrixWitness { role: MatrixRole::Torsion, order: ElementOrder::Finite(2), matrix: minus_id },
        ],
        Qualifier::SearchBounded { bound, exhausted },
        move |w| w.verify(&subject),
    )
}

/// `Σ c_i B_i`
pub(crate) fn combine(basis: &[IntMatrix], coeffs: &[BigInt]) -> IntMatrix {
    let d = basis[0].dim();
    basis.iter().zip(coeffs).fold(IntMatrix::zero(d), |acc, (b, c)| acc.add(&b.scale(c)))
}

/// Whether `u = ±g^n` for some integer `n`.
pub fn is_signed_power(u: &IntMatrix, g: &IntMatrix) -> bool {
    let Ok(g_inv) = g.inverse() else {
        return false;
    };
    let limit = u.height();
    for step in [g, &g_inv] {
        let mut p = IntMatrix::identity(g.dim());
        // heights of powers of an infinite-order unit eventually exceed any bound
        for _ in 0..64 {
            p = &p * step;
            if p == *u || -&p == *u {
                return true;
            }
            if p.height() > &limit * 4 + 4 {
                break;
            }
        }
    }
    false
}

/// Unit of the commutant predicted by the quadratic-order fundamental unit.
///
/// Writes the commutant as `Z·I + Z·N` with `N = (M − m₁₁·I)/g` primitive,
/// takes the fundamental unit `(x + y√D)/2` of the order of discriminant
/// `D = tr(N)² − 4·det(N)` and maps `√D ↦ 2N − tr(N)·I`.
pub fn centralizer_generator_from_pell(m: &IntMatrix) -> Result<IntMatrix> {
    check_infinite_order_2d(m)?;
    let a = m.get(0, 0).clone();
    let shifted = m.sub(&IntMatrix::identity(2).scale(&a));
    let g = shifted.entries().iter().fold(BigInt::zero(), |g, e| g.gcd(e));
    let n = IntMatrix::from_flat(2, shifted.entries().iter().map(|e| e / &g).collect())?;
    let t = n.trace();
    let disc: BigInt = &t * &t - n.det() * 4;
    if !disc.is_positive() {
        return Err(Error::PellDomain(format!("discriminant {disc} (parabolic or elliptic)")));
    }
    let u = order_fundamental_unit(&disc)?;
    // G = a'·I + y·N with x = 2a' + y·t
    let a_part = (&u.x - &u.y * &t) / 2;
    Ok(IntMatrix::identity(2).scale(&a_part).add(&n.scale(&u.y)))
}

#[derive(Debug, Clone, Serialize)]
pub struct PellCrossCheck {
    pub search_generator: IntMatrix,
    pub pell_generator: IntMatrix,
    pub agree: bool,
}

/// Compares the lattice-search generator with the Pell prediction, up to
/// sign and inversion.
pub fn pell_cross_check(m: &IntMatrix, bound: u64) -> Result<PellCrossCheck> {
    let pres = centralizer_units_2d(m, bound)?;
    let search = pres.witnesses[0].matrix.clone();
    let pell = centralizer_generator_from_pell(m)?;
    let inv = pell.inverse()?;
    let agree = [&pell, &inv].iter().any(|p| **p == search || -*p == search);
    Ok(PellCrossCheck { search_generator: search, pell_generator: pell, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lattice::{hermite_normal_form, lattice_coordinates};

    fn span_equal(a: &[IntMatrix], b: &[IntMatrix]) -> bool {
        let va: Vec<Vec<BigInt>> = a.iter().map(|m| m.entries().to_vec()).collect();
        let vb: Vec<Vec<BigInt>> = b.iter().map(|m| m.entries().to_vec()).collect();
        hermite_normal_form(&va) == hermite_normal_form(&vb)
    }

    #[test]
    fn commutant_of_fibonacci_matrix() {
        let m = IntMatrix::from_i64([[1, 1], [1, 0]]);
        let basis = commutant_basis(&m);
        assert_eq!(basis.len(), 2);
        assert!(span_equal(&basis, &[IntMatrix::identity(2), m.clone()]));
        for b in &basis {
            assert!(b.commutes_with(&m));
        }
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        assert_eq!(commutant_basis(&IntMatrix::identity(2)).len(), 4);
    }

    #[test]
    fn commutant_of_diagonal() {
        let basis = commutant_basis(&IntMatrix::from_i64([[1, 0], [0, 2]]));
        assert_eq!(basis, vec![IntMatrix::from_i64([[1, 0], [0, 0]]), IntMatrix::from_i64([[0, 0], [0, 1]])]);
    }

    #[test]
    fn commutant_rank_equals_degree_for_irreducible_cubic() {
        let m = IntMatrix::from_i64([[0, 0, 1], [1, 0, 1], [0, 1, 0]]);
        let basis = commutant_basis(&m);
        assert_eq!(basis.len(), 3);
        // I, M, M^2 all lie in the lattice
        let rows: Vec<Vec<BigInt>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        for p in [IntMatrix::identity(3), m.clone(), m.pow(2)] {
            assert!(lattice_coordinates(&rows, p.entries()).is_some());
        }
    }

    #[test]
    fn centralizer_generators() {
        let fib = IntMatrix::from_i64([[1, 1], [1, 0]]);
        let g = |m: &IntMatrix| centralizer_units_2d(m, 5).unwrap().witnesses[0].matrix.clone();
        assert_eq!(g(&fib), fib);
        assert_eq!(g(&IntMatrix::from_i64([[2, 1], [1, 1]])), fib);
        let parabolic = IntMatrix::from_i64([[1, 1], [0, 1]]);
        assert_eq!(g(&parabolic), parabolic);
        let pres = centralizer_units_2d(&parabolic, 5).unwrap();
        assert_eq!(pres.torsion, "{±I}");
        assert_eq!(pres.free_rank, 1);
    }

    #[test]
    fn centralizer_rejects_finite_order() {
        let r = centralizer_units_2d(&IntMatrix::from_i64([[0, -1], [1, 0]]), 3);
        assert_eq!(r.unwrap_err(), Error::FiniteOrder(4));
        let r = centralizer_units_2d(&IntMatrix::from_i64([[2, 0], [0, 1]]), 3);
        assert!(matches!(r, Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn pell_prediction_matches_search() {
        for m in [
            IntMatrix::from_i64([[2, 1], [1, 1]]),
            IntMatrix::from_i64([[1, 1], [1, 0]]),
            IntMatrix::from_i64([[3, 2], [1, 1]]),
            IntMatrix::from_i64([[5, 2], [2, 1]]),
            IntMatrix::from_i64([[0, 1], [1, 3]]),
        ] {
            let c = pell_cross_check(&m, 8).unwrap();
            assert!(c.agree, "{m}: search {} vs pell {}", c.search_generator, c.pell_generator);
        }
    }
}
