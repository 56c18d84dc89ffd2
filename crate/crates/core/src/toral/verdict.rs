use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::{factor_over_z, is_irreducible, root_signature, IntMatrix, IntPolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    /// Odd dimension with irreducible characteristic polynomial.
    ExcludedByParity,
    ExcludedBySelfReciprocity,
    /// Reversibility is not ruled out; a search is needed to decide.
    NecessaryConditionHolds,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::ExcludedByParity => "excluded-by-parity",
            VerdictKind::ExcludedBySelfReciprocity => "excluded-by-self-reciprocity",
            VerdictKind::NecessaryConditionHolds => "necessary-condition-holds",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorEntry {
    pub factor: IntPolynomial,
    pub multiplicity: usize,
}

/// Algebraic necessary conditions for `M` to be conjugate to `M⁻¹` in
/// `GL(d, Z)`.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(serialize_with = "crate::num_serde::int")]
    pub det: BigInt,
    pub char_poly: IntPolynomial,
    pub factors: Vec<FactorEntry>,
}

pub fn reversibility_verdict(m: &IntMatrix) -> Result<Verdict> {
    let det = m.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let p = IntPolynomial::char_poly(m);
    let factors: Vec<FactorEntry> =
        factor_over_z(&p)?.into_iter().map(|(factor, multiplicity)| FactorEntry { factor, multiplicity }).collect();
    let irreducible = factors.len() == 1 && factors[0].multiplicity == 1;
    let kind = if m.dim() % 2 == 1 && irreducible {
        VerdictKind::ExcludedByParity
    } else if !p.is_self_reciprocal(&det)? {
        VerdictKind::ExcludedBySelfReciprocity
    } else {
        VerdictKind::NecessaryConditionHolds
    };
    Ok(Verdict { kind, det, char_poly: p, factors })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitSignature {
    pub n1: usize,
    pub n2: usize,
    pub rank: usize,
    pub torsion: String,
}

pub const TORSION_UNDETERMINED: &str = "cyclotomic torsion possible, undetermined";

/// Unit rank `n₁ + n₂ − 1` of the order attached to an irreducible
/// characteristic polynomial, with the torsion `{±1}` whenever a real
/// embedding exists.
pub fn unit_group_signature(p: &IntPolynomial) -> Result<UnitSignature> {
    if !is_irreducible(p)? {
        return Err(Error::Reducible);
    }
    let sig = root_signature(p)?;
    let torsion = if sig.n1 >= 1 { "{±1}" } else { TORSION_UNDETERMINED };
    Ok(UnitSignature {
        n1: sig.n1,
        n2: sig.n2,
        rank: (sig.n1 + sig.n2).saturating_sub(1),
        torsion: torsion.to_string(),
    })
}

/// For a reversor of order `2^ℓ·(2m+1)`, returns `(2m+1, 2^ℓ)`: the odd
/// power that is again a reversor, and its order.
pub fn reversor_power_reduction(order: u64) -> Result<(u64, u64)> {
    if order == 0 || order % 2 == 1 {
        return Err(Error::OddReversorOrder(order));
    }
    let two = 1u64 << order.trailing_zeros();
    Ok((order / two, two))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn verdicts() {
        let cubic = poly(&[-1, -1, 0, 1]).companion_matrix().unwrap();
        assert_eq!(reversibility_verdict(&cubic).unwrap().kind, VerdictKind::ExcludedByParity);
        let fib = IntMatrix::from_i64([[1, 1], [1, 0]]);
        let v = reversibility_verdict(&fib).unwrap();
        assert_eq!(v.kind, VerdictKind::ExcludedBySelfReciprocity);
        assert_eq!(v.char_poly, poly(&[-1, -1, 1]));
        let cat = poly(&[1, -3, 1]).companion_matrix().unwrap();
        assert_eq!(reversibility_verdict(&cat).unwrap().kind, VerdictKind::NecessaryConditionHolds);
        assert!(reversibility_verdict(&IntMatrix::from_i64([[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn signatures() {
        let s = unit_group_signature(&poly(&[1, -3, 1])).unwrap();
        assert_eq!((s.n1, s.n2, s.rank, s.torsion.as_str()), (2, 0, 1, "{±1}"));
        let s = unit_group_signature(&poly(&[-1, -1, 0, 1])).unwrap();
        assert_eq!((s.n1, s.n2, s.rank, s.torsion.as_str()), (1, 1, 1, "{±1}"));
        let s = unit_group_signature(&poly(&[1, 1, 1])).unwrap();
        assert_eq!((s.n1, s.n2, s.rank, s.torsion.as_str()), (0, 1, 0, TORSION_UNDETERMINED));
        assert_eq!(unit_group_signature(&poly(&[-1, 0, 1])), Err(Error::Reducible));
    }

    #[test]
    fn power_reduction() {
        assert_eq!(reversor_power_reduction(12).unwrap(), (3, 4));
        assert_eq!(reversor_power_reduction(2).unwrap(), (1, 2));
        assert_eq!(reversor_power_reduction(6).unwrap(), (3, 2));
        assert_eq!(reversor_power_reduction(5), Err(Error::OddReversorOrder(5)));
    }
}
