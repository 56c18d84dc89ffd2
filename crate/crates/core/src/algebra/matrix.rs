use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num_serde::Int;

/// Square matrix over the integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Int>>", into = "Vec<Vec<Int>>")]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Malformed("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NonSquare { rows: dim, row: i, len: row.len() });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Shorthand for small literal matrices. Panics on ragged input.
    pub fn from_i64<const N: usize>(rows: [[i64; N]; N]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| BigInt::from(v))).collect();
        IntMatrix { dim: N, entries }
    }

    pub fn from_flat(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: entries.len() });
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn scalar(dim: usize, c: i64) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::from(c);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Entries as `i64`, when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.entries.chunks(self.dim).map(|r| r.iter().map(|v| v.to_i64()).collect::<Option<Vec<_>>>()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut t = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                t.entries[j * d + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_scalar(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| i == j || self.get(i, j).is_zero()))
            && (1..d).all(|i| self.get(i, i) == self.get(0, 0))
    }

    /// Largest absolute entry.
    pub fn height(&self) -> BigInt {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Adjugate matrix, so that `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.dim;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<BigInt> = (0..n)
                    .filter(|&r| r != j)
                    .flat_map(|r| (0..n).filter(|&c| c != i).map(move |c| (r, c)))
                    .map(|(r, c)| self.get(r, c).clone())
                    .collect();
                let cof = IntMatrix { dim: n - 1, entries: minor }.det();
                adj.entries[i * n + j] = if (i + j).is_even() { cof } else { -cof };
            }
        }
        adj
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let adj = self.adjugate();
        Ok(if det.is_one() { adj } else { -adj })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Smallest `k` in `1..=cap` with `self^k = I`.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let id = Self::identity(self.dim);
        let mut p = self.clone();
        for k in 1..=cap {
            if p == id {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        &(self * other) == &(other * self)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        IntMatrix { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        IntMatrix { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        self.entries.chunks(self.dim).map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Integer 2-vector image, for the small lattice maps of the planar module.
    pub fn apply_i64(&self, v: (i64, i64)) -> (i64, i64) {
        use num_traits::ToPrimitive;
        assert_eq!(self.dim, 2);
        let r = self.apply(&[BigInt::from(v.0), BigInt::from(v.1)]);
        (r[0].to_i64().expect("overflow"), r[1].to_i64().expect("overflow"))
    }
}

impl TryFrom<Vec<Vec<BigInt>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<BigInt>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl TryFrom<Vec<Vec<Int>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Int>>) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(|v| v.0).collect()).collect();
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<Int>> {
    fn from(m: IntMatrix) -> Self {
        m.rows().into_iter().map(|r| r.into_iter().map(Int).collect()).collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * &rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul for IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: IntMatrix) -> IntMatrix {
        &self * &rhs
    }
}

impl Neg for IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { dim: self.dim, entries: self.entries.into_iter().map(|e| -e).collect() }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        -self.clone()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.dim).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMatrix::from_i64([[2, 1], [1, 1]]);
        assert_eq!(m.det(), BigInt::from(1));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());

        let f = IntMatrix::from_i64([[1, 1], [1, 0]]);
        assert_eq!(f.det(), BigInt::from(-1));
        assert_eq!(f.inverse().unwrap(), IntMatrix::from_i64([[0, 1], [1, -1]]));

        let s = IntMatrix::from_i64([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        assert_eq!(s.det(), BigInt::from(1));
        assert!((&s * &s.inverse().unwrap()).is_identity());

        assert!(IntMatrix::from_i64([[2, 0], [0, 1]]).inverse().is_err());
    }

    #[test]
    fn det_needs_pivot_swap() {
        let m = IntMatrix::from_i64([[0, 2, 1], [1, 0, 0], [0, 1, 3]]);
        // cofactor expansion along the second row: -1 * (2*3 - 1*1) = -5
        assert_eq!(m.det(), BigInt::from(-5));
    }

    #[test]
    fn orders() {
        assert_eq!(IntMatrix::from_i64([[0, -1], [1, 0]]).order(12), Some(4));
        assert_eq!(IntMatrix::from_i64([[0, -1], [1, 1]]).order(12), Some(6));
        assert_eq!(IntMatrix::from_i64([[-1, -1], [1, 0]]).order(12), Some(3));
        assert_eq!(IntMatrix::from_i64([[1, 1], [0, 1]]).order(12), None);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = IntMatrix::from_rows(&[vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::NonSquare { .. }));
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }
}
