//! Exact elimination over the integers: kernels of integer matrices as free
//! modules, and Hermite normal forms of row lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `s·a + t·b = g` with `g >= 0`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Basis of `{ v ∈ Z^cols : A v = 0 }` as a free Z-module, in Hermite normal
/// form. Empty iff the kernel is trivial.
pub fn integer_kernel(system: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = system.to_vec();
    for row in &a {
        assert_eq!(row.len(), cols, "ragged system");
    }
    // u tracks the column operations: a_original * u = a
    let mut u: Vec<Vec<BigInt>> =
        (0..cols).map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();

    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == cols {
            break;
        }
        for j in pivot + 1..cols {
            if a[r][j].is_zero() {
                continue;
            }
            let (x, y) = (a[r][pivot].clone(), a[r][j].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            // columns (pivot, j) <- (s·c_p + t·c_j, −(y/g)·c_p + (x/g)·c_j)
            for m in [&mut a, &mut u] {
                for row in m.iter_mut() {
                    let cp = row[pivot].clone();
                    let cj = row[j].clone();
                    row[pivot] = &s * &cp + &t * &cj;
                    row[j] = &xg * &cj - &yg * &cp;
                }
            }
        }
        if !a[r][pivot].is_zero() {
            pivot += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (pivot..cols).map(|c| (0..cols).map(|i| u[i][c].clone()).collect()).collect();
    hermite_normal_form(&basis)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped. Pivots are positive and entries above a pivot lie in
/// `[0, pivot)`, which makes the result a canonical basis.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(cols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut h: Vec<Vec<BigInt>> = rows.to_vec();
    let mut p = 0;
    for c in 0..cols {
        if p == h.len() {
            break;
        }
        for r in p + 1..h.len() {
            if h[r][c].is_zero() {
                continue;
            }
            let (x, y) = (h[p][c].clone(), h[r][c].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            let (rp, rr) = (h[p].clone(), h[r].clone());
            for k in 0..cols {
                h[p][k] = &s * &rp[k] + &t * &rr[k];
                h[r][k] = &xg * &rr[k] - &yg * &rp[k];
            }
        }
        if h[p][c].is_zero() {
            continue;
        }
        if h[p][c].is_negative() {
            for v in h[p].iter_mut() {
                *v = -v.clone();
            }
        }
        for r in 0..p {
            let q = h[r][c].div_floor(&h[p][c]);
            if !q.is_zero() {
                for k in 0..cols {
                    let d = &q * &h[p][k];
                    h[r][k] -= d;
                }
            }
        }
        p += 1;
    }
    h.truncate(p);
    h
}

/// Rank of the lattice spanned by `rows`.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    hermite_normal_form(rows).len()
}

/// Whether `v` lies in the Z-span of the HNF basis `basis`; returns the
/// coordinates if so.
pub fn lattice_coordinates(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let c = b.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[c].div_rem(&b[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(b) {
            *x -= &q * y;
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn zero_map_kernel_is_standard_basis() {
        let k = integer_kernel(&rows(&[&[0, 0, 0]]), 3);
        assert_eq!(k, rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn identity_kernel_is_trivial() {
        let k = integer_kernel(&rows(&[&[1, 0], &[0, 1]]), 2);
        assert!(k.is_empty());
    }

    #[test]
    fn non_saturated_direction() {
        // 2x + 4y = 0
        let k = integer_kernel(&rows(&[&[2, 4]]), 2);
        assert_eq!(k, rows(&[&[2, -1]]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&rows(&[&[2, 3], &[4, 5]]));
        let b = hermite_normal_form(&rows(&[&[2, 2], &[4, 5]]));
        assert_eq!(a, rows(&[&[2, 0], &[0, 1]]));
        assert_eq!(a, b);
        assert_eq!(rank(&rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn coordinates() {
        let basis = rows(&[&[1, 0, 0, 1], &[0, 1, 1, -1]]);
        let v: Vec<BigInt> = [1, 1, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(lattice_coordinates(&basis, &v), Some(vec![BigInt::one(), BigInt::one()]));
        let w: Vec<BigInt> = [1, 1, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(lattice_coordinates(&basis, &w), None);
    }
}
