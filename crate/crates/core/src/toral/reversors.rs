use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::commutant::{centralizer_units_2d, combine, height_key};
use super::{check_infinite_order_2d, coefficient_box, reversor_power_reduction, MatrixRole, MatrixWitness};
use crate::algebra::{integer_kernel, IntMatrix};
use crate::error::{Error, Result};
use crate::group::{ElementOrder, Extension, GroupPresentation, Qualifier};

/// Orders of reversors are computed up to this cap.
pub const REVERSOR_ORDER_CAP: u32 = 24;

#[derive(Debug, Clone, Serialize)]
pub struct FoundReversor {
    pub matrix: IntMatrix,
    pub order: ElementOrder,
}

/// Outcome of a bounded search for `H` with `H·M·H⁻¹ = sign·M⁻¹`.
#[derive(Debug, Clone, Serialize)]
pub struct ReversorSearchResult {
    pub sign: i8,
    pub bound: u64,
    pub found: Vec<FoundReversor>,
    pub exhausted: bool,
}

impl ReversorSearchResult {
    pub fn orders(&self) -> BTreeSet<ElementOrder> {
        self.found.iter().map(|r| r.order).collect()
    }

    pub fn contains(&self, h: &IntMatrix) -> bool {
        self.found.iter().any(|r| r.matrix == *h)
    }

    pub fn first_of_order(&self, k: u32) -> Option<&IntMatrix> {
        self.found.iter().find(|r| r.order == ElementOrder::Finite(k)).map(|r| &r.matrix)
    }
}

/// Whether `h·m·h⁻¹ = sign·m⁻¹` holds exactly.
pub fn is_reversor(m: &IntMatrix, h: &IntMatrix, sign: i8) -> bool {
    let (Ok(h_inv), Ok(m_inv)) = (h.inverse(), m.inverse()) else {
        return false;
    };
    let target = if sign < 0 { -m_inv } else { m_inv };
    &(h * m) * &h_inv == target
}

/// Integer solutions of the linear condition `H·M = sign·M⁻¹·H`, as a lattice
/// basis.
pub fn reversor_lattice(m: &IntMatrix, sign: i8) -> Result<Vec<IntMatrix>> {
    let d = m.dim();
    let m_inv = m.inverse()?;
    let s = BigInt::from(sign.signum());
    let mut system = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut row = vec![BigInt::zero(); d * d];
            for k in 0..d {
                row[i * d + k] += m.get(k, j);
                row[k * d + j] -= &s * m_inv.get(i, k);
            }
            system.push(row);
        }
    }
    Ok(integer_kernel(&system, d * d).into_iter().map(|v| IntMatrix::from_flat(d, v).expect("d*d entries")).collect())
}

/// All unimodular `H` with `H·M·H⁻¹ = sign·M⁻¹` whose coordinates in the
/// solution lattice lie in `[-bound, bound]`. `sign = −1` is the reversibility
/// question in `PGL(2, Z)`, where `±1` are identified.
pub fn find_reversors_2d(m: &IntMatrix, sign: i8, bound: u64) -> Result<ReversorSearchResult> {
    check_infinite_order_2d(m)?;
    let sign = if sign < 0 { -1 } else { 1 };
    let basis = reversor_lattice(m, sign)?;
    let mut found = Vec::new();
    let mut exhausted = true;
    if !basis.is_empty() {
        let (coeffs, complete) = coefficient_box(basis.len(), bound);
        exhausted = complete;
        for c in coeffs {
            let h = combine(&basis, &c);
            if !h.det().abs().is_one() {
                continue;
            }
            if !is_reversor(m, &h, sign) {
                return Err(Error::Invariant(format!("lattice point {h} fails the reversor relation")));
            }
            let order = h.order(REVERSOR_ORDER_CAP).map_or(ElementOrder::Infinite, ElementOrder::Finite);
            found.push(FoundReversor { matrix: h, order });
        }
    }
    found.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| height_key(&a.matrix).cmp(&height_key(&b.matrix))));
    let result = ReversorSearchResult { sign, bound, found, exhausted };
    check_reversor_orders(m, &result)?;
    Ok(result)
}

/// No reversor has odd order, and odd powers of finite-order reversors are
/// reversors of the 2-part of the order.
fn check_reversor_orders(m: &IntMatrix, result: &ReversorSearchResult) -> Result<()> {
    for r in &result.found {
        let Some(k) = r.order.finite() else { continue };
        let (exp, reduced) = reversor_power_reduction(k as u64)?;
        let h = r.matrix.pow(exp as u32);
        if !is_reversor(m, &h, result.sign) || h.order(REVERSOR_ORDER_CAP) != Some(reduced as u32) {
            return Err(Error::Invariant(format!(
                "odd power {exp} of reversor {} is not a reversor of order {reduced}",
                r.matrix
            )));
        }
    }
    Ok(())
}

/// Reversing symmetry group type of an infinite-order `M ∈ GL(2, Z)`, from
/// the orders of reversors met within `bound`.
pub fn classify_reversing_group_2d(m: &IntMatrix, bound: u64) -> Result<GroupPresentation<MatrixWitness>> {
    let centralizer = centralizer_units_2d(m, bound)?;
    let search = find_reversors_2d(m, 1, bound)?;
    let mut two_parts = BTreeSet::new();
    for r in &search.found {
        if let Some(k) = r.order.finite() {
            two_parts.insert(reversor_power_reduction(k as u64)?.1 as u32);
        }
    }
    let (label, extension) = match (two_parts.contains(&2), two_parts.contains(&4)) {
        (true, true) => ("(C₂×C∞)⋊C₂", Extension::Mixed),
        (true, false) => ("C₂×D∞", Extension::DihedralInfinite),
        (false, true) => ("C∞⋊C₄", Extension::SemidirectC4),
        (false, false) => ("C₂×C∞ (irreversible within bound)", Extension::None),
    };

    let mut witnesses = centralizer.witnesses.clone();
    for k in [2, 4] {
        if let Some(h) = search.found.iter().find(|r| r.order == ElementOrder::Finite(k)) {
            witnesses.push(MatrixWitness {
                role: MatrixRole::Reversor { sign: 1 },
                order: h.order,
                matrix: h.matrix.clone(),
            });
        }
    }
    let exhausted =
        search.exhausted && matches!(centralizer.qualifier, Qualifier::SearchBounded { exhausted: true, .. });
    let subject = m.clone();
    GroupPresentation::new(
        label,
        "{±I}",
        1,
        extension,
        search.orders(),
        witnesses,
        Qualifier::SearchBounded { bound, exhausted },
        move |w| w.verify(&subject),
    )
}

/// Scans unimodular matrices of infinite order with entries in
/// `[-entry_bound, entry_bound]` and returns the first (in height order) whose
/// reversing group has the requested extension type.
pub fn find_example_of_type(extension: Extension, entry_bound: i64, search_bound: u64) -> Option<IntMatrix> {
    let mut candidates = Vec::new();
    let r = -entry_bound..=entry_bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if (a * d - b * c).abs() == 1 && (a + d).abs() >= 2 {
                        candidates.push(IntMatrix::from_i64([[a, b], [c, d]]));
                    }
                }
            }
        }
    }
    candidates.sort_by_key(height_key);
    candidates
        .into_iter()
        .find(|m| classify_reversing_group_2d(m, search_bound).is_ok_and(|p| p.extension == extension))
}

impl MatrixWitness {
    pub fn verify(&self, subject: &IntMatrix) -> bool {
        let m = &self.matrix;
        let order_ok = match self.order {
            ElementOrder::Finite(k) => m.order(k) == Some(k),
            ElementOrder::Infinite => m.order(REVERSOR_ORDER_CAP).is_none(),
        };
        let role_ok = match self.role {
            MatrixRole::Generator | MatrixRole::Torsion => m.det().abs().is_one() && m.commutes_with(subject),
            MatrixRole::Reversor { sign } => is_reversor(subject, m, sign),
        };
        order_ok && role_ok
    }
}
