//! Ledrappier's shift: binary configurations with
//! `x_n + x_{n+e₁} + x_{n+e₂} ≡ 0 (mod 2)` for all `n`.

use rayon::prelude::*;
use serde::Serialize;

use super::patch::{LatticeMap, Patch2D, Point, SparsePatch};
use crate::error::{Error, Result};

pub const MAX_COUNT_SIZE: usize = 12;

fn bit(c: char) -> Result<u8> {
    match c {
        '0' => Ok(0),
        '1' => Ok(1),
        other => Err(Error::Alphabet(format!("Ledrappier patches use 0/1, found {other:?}"))),
    }
}

/// True iff every elementary triangle `n, n+e₁, n+e₂` inside the patch has
/// even sum.
pub fn ledrappier_valid(patch: &Patch2D) -> Result<bool> {
    for c in patch.letters() {
        bit(c)?;
    }
    Ok(ledrappier_valid_sparse(&patch.to_sparse())?.0)
}

/// Validity on the triangles fully contained in a sparse patch. Also
/// returns the number of triangles checked.
pub fn ledrappier_valid_sparse(patch: &SparsePatch) -> Result<(bool, usize)> {
    let mut checked = 0;
    for (&(x, y), &c) in patch {
        let (Some(&r), Some(&u)) = (patch.get(&(x + 1, y)), patch.get(&(x, y + 1))) else {
            continue;
        };
        checked += 1;
        if bit(c)? ^ bit(r)? ^ bit(u)? != 0 {
            return Ok((false, checked));
        }
    }
    Ok((true, checked))
}

/// The next row up is forced except for its last cell:
/// `x(i, y+1) = x(i, y) + x(i+1, y)` for `i ≤ n−2`.
fn propagate(row: u32, n: usize, top_bit: u32) -> u32 {
    let mask = (1u32 << (n - 1)) - 1;
    ((row ^ (row >> 1)) & mask) | (top_bit << (n - 1))
}

fn rows_valid(rows: &[u32], n: usize) -> bool {
    let mask = (1u32 << (n - 1)) - 1;
    rows.windows(2).all(|w| (w[0] ^ (w[0] >> 1) ^ w[1]) & mask == 0)
}

/// Counts valid `n×n` patches. The bottom row and the right column are
/// free; every other cell follows by propagation, and each propagated patch
/// is re-checked against the constraint.
pub fn ledrappier_count(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_COUNT_SIZE {
        return Err(Error::Malformed(format!("patch size must be in 1..={MAX_COUNT_SIZE}, got {n}")));
    }
    let column_choices = 1u32 << (n - 1);
    let count = (0..1u32 << n)
        .into_par_iter()
        .map(|bottom| {
            let mut valid = 0u64;
            let mut rows = vec![0u32; n];
            for column in 0..column_choices {
                rows[0] = bottom;
                for y in 1..n {
                    rows[y] = propagate(rows[y - 1], n, (column >> (y - 1)) & 1);
                }
                if rows_valid(&rows, n) {
                    valid += 1;
                }
            }
            valid
        })
        .sum();
    Ok(count)
}

/// All valid patches on the `n×n` square at `origin`, in propagation order.
pub fn ledrappier_patches(n: usize, origin: Point) -> Result<Vec<Patch2D>> {
    if n == 0 || n > 6 {
        return Err(Error::Malformed(format!("patch enumeration supports sizes 1..=6, got {n}")));
    }
    let mut out = Vec::with_capacity(1 << (2 * n - 1));
    let mut rows = vec![0u32; n];
    for bottom in 0..1u32 << n {
        for column in 0..1u32 << (n - 1) {
            rows[0] = bottom;
            for y in 1..n {
                rows[y] = propagate(rows[y - 1], n, (column >> (y - 1)) & 1);
            }
            out.push(Patch2D::from_fn(origin, n, n, |(x, y)| {
                let (i, j) = ((x - origin.0) as usize, (y - origin.1) as usize);
                if rows[j] >> i & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            }));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeSymmetryReport {
    pub holds: bool,
    pub patches_checked: usize,
    pub triangles_per_patch: usize,
    /// A valid patch whose transport is invalid.
    pub counterexample: Option<Patch2D>,
}

/// Transports every valid patch from `patches` by `map` and checks the
/// image against `valid`, which returns the verdict and the number of
/// constraints it could evaluate.
pub fn verify_lattice_symmetry(
    patches: &[Patch2D],
    valid: impl Fn(&SparsePatch) -> Result<(bool, usize)> + Sync,
    map: &LatticeMap,
) -> Result<LatticeSymmetryReport> {
    let mut triangles = 0;
    for (checked, p) in patches.iter().enumerate() {
        let (ok, t) = valid(&map.transport(&p.to_sparse()))?;
        if t == 0 {
            return Err(Error::RegionTooSmall("the transported region contains no constraint".into()));
        }
        triangles = triangles.max(t);
        if !ok {
            return Ok(LatticeSymmetryReport {
                holds: false,
                patches_checked: checked + 1,
                triangles_per_patch: triangles,
                counterexample: Some(p.clone()),
            });
        }
    }
    if patches.is_empty() {
        return Err(Error::RegionTooSmall("no patches".into()));
    }
    Ok(LatticeSymmetryReport {
        holds: true,
        patches_checked: patches.len(),
        triangles_per_patch: triangles,
        counterexample: None,
    })
}

/// Ledrappier case on the `n×n` square centred near the origin.
pub fn verify_ledrappier_symmetry(map: &LatticeMap, n: usize) -> Result<LatticeSymmetryReport> {
    let half = (n / 2) as i64;
    let patches = ledrappier_patches(n, (-half, -half))?;
    verify_lattice_symmetry(&patches, ledrappier_valid_sparse, map)
}

/// `A = [[−1,−1],[1,0]]` of order 3 and `B = [[0,1],[1,0]]`.
pub fn d3_generators() -> (LatticeMap, LatticeMap) {
    (
        LatticeMap::from_i64([[-1, -1], [1, 0]]).expect("unimodular"),
        LatticeMap::from_i64([[0, 1], [1, 0]]).expect("unimodular"),
    )
}

/// `{1, A, A², B, AB, A²B}`
pub fn d3_elements() -> Vec<LatticeMap> {
    let (a, b) = d3_generators();
    let id = LatticeMap::from_i64([[1, 0], [0, 1]]).expect("unimodular");
    let a2 = a.then(&a);
    vec![id, a.clone(), a2.clone(), b.clone(), b.then(&a), b.then(&a2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(n: usize) -> u64 {
        let cells = n * n;
        (0..1u64 << cells)
            .filter(|bits| {
                let p = Patch2D::from_fn((0, 0), n, n, |(x, y)| {
                    if bits >> (y as usize * n + x as usize) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                });
                ledrappier_valid(&p).unwrap()
            })
            .count() as u64
    }

    #[test]
    fn validity_examples() {
        assert!(ledrappier_valid(&Patch2D::filled((0, 0), 3, 3, '0')).unwrap());
        for top_right in ['0', '1'] {
            let p = Patch2D::from_text(&format!("1{top_right}\n10\n"), (0, 0)).unwrap();
            assert!(ledrappier_valid(&p).unwrap());
        }
        let bad = Patch2D::from_text("00\n10\n", (0, 0)).unwrap();
        assert!(!ledrappier_valid(&bad).unwrap());
        let wrong = Patch2D::from_text("ab\n", (0, 0)).unwrap();
        assert!(matches!(ledrappier_valid(&wrong), Err(Error::Alphabet(_))));
    }

    #[test]
    fn counts_match_enumeration() {
        for n in 1..=4 {
            assert_eq!(ledrappier_count(n).unwrap(), brute_count(n), "n = {n}");
        }
        for n in 1..=8 {
            assert_eq!(ledrappier_count(n).unwrap(), 1 << (2 * n - 1));
        }
        assert!(ledrappier_count(13).is_err());
    }

    #[test]
    fn enumerated_patches_are_valid_and_distinct() {
        let ps = ledrappier_patches(4, (-2, -2)).unwrap();
        assert_eq!(ps.len(), 128);
        assert!(ps.iter().all(|p| ledrappier_valid(p).unwrap()));
        let distinct: std::collections::BTreeSet<String> = ps.iter().map(Patch2D::to_text).collect();
        assert_eq!(distinct.len(), 128);
    }

    #[test]
    fn d3_acts() {
        for m in d3_elements() {
            let r = verify_ledrappier_symmetry(&m, 5).unwrap();
            assert!(r.holds, "{}", m.matrix);
        }
        let six = LatticeMap::from_i64([[0, -1], [1, 1]]).unwrap();
        let r = verify_ledrappier_symmetry(&six, 4).unwrap();
        assert!(!r.holds);
        let p = r.counterexample.unwrap();
        assert!(ledrappier_valid(&p).unwrap());
        assert!(!ledrappier_valid_sparse(&six.transport(&p.to_sparse())).unwrap().0);
    }

    #[test]
    fn tiny_region_rejected() {
        let (a, _) = d3_generators();
        assert!(matches!(verify_ledrappier_symmetry(&a, 1), Err(Error::RegionTooSmall(_))));
    }
}
