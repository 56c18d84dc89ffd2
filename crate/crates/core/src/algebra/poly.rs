use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::num_serde::Int;

/// Polynomial with integer coefficients, constant term first.
///
/// Trailing zero coefficients are always stripped, so `coeffs().len() - 1`
/// is the degree and the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Int>", into = "Vec<Int>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// `x^d p(1/x)` for `d = deg p`: the coefficient sequence reversed.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(BigInt::one()), |acc, _| &acc * self)
    }

    /// Exact division in `Z[x]`; `None` unless `divisor` divides `self` with
    /// integral quotient and zero remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let Some(nd) = self.degree() else {
            return Some(Self::zero());
        };
        if nd < dd {
            return None;
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }

    /// Normalize sign so that the leading coefficient is positive.
    pub fn with_positive_leading(self) -> Self {
        if self.leading().is_negative() {
            -self
        } else {
            self
        }
    }

    /// Characteristic polynomial `det(x·1 − M)` (monic).
    ///
    /// Faddeev–LeVerrier recursion: every division is exact over the integers.
    pub fn char_poly(m: &IntMatrix) -> Self {
        let n = m.dim();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let id = IntMatrix::identity(n);
        let mut aux = IntMatrix::zero(n);
        for k in 1..=n {
            // M_k = M·M_{k-1} + c_{n-k+1} I
            aux = (m * &aux).add(&id.scale(&coeffs[n - k + 1]));
            let t = (m * &aux).trace();
            coeffs[n - k] = -t / BigInt::from(k);
        }
        Self::new(coeffs)
    }

    /// Frobenius companion matrix: sub-diagonal ones, negated coefficients of
    /// `p` in the last column.
    pub fn companion_matrix(&self) -> Result<IntMatrix> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::Malformed("companion matrix needs degree >= 1".into()));
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let mut m = IntMatrix::zero(d);
        for i in 1..d {
            m.set(i, i - 1, BigInt::one());
        }
        for i in 0..d {
            m.set(i, d - 1, -self.coeffs[i].clone());
        }
        Ok(m)
    }

    /// Self-reciprocity: `p(x) = (−1)^d x^d p(1/x) / det`.
    pub fn is_self_reciprocal(&self, det: &BigInt) -> Result<bool> {
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::Malformed("self-reciprocity needs degree >= 1".into()));
        }
        // dividing by det = ±1 is multiplying by it
        let sign = if d.is_even() { det.clone() } else { -det.clone() };
        Ok((0..=d).all(|i| self.coeff(i) == &sign * &self.coeff(d - i)))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl From<Vec<Int>> for IntPolynomial {
    fn from(c: Vec<Int>) -> Self {
        IntPolynomial::new(c.into_iter().map(|v| v.0).collect())
    }
}

impl From<IntPolynomial> for Vec<Int> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.into_iter().map(Int).collect()
    }
}

impl From<Vec<BigInt>> for IntPolynomial {
    fn from(c: Vec<BigInt>) -> Self {
        IntPolynomial::new(c)
    }
}

impl From<IntPolynomial> for Vec<BigInt> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn char_poly_examples() {
        let fib = IntMatrix::from_i64([[1, 1], [1, 0]]);
        assert_eq!(IntPolynomial::char_poly(&fib), p(&[-1, -1, 1]));
        assert_eq!(IntPolynomial::char_poly(&IntMatrix::identity(2)), p(&[1, -2, 1]));
        let cat = IntMatrix::from_i64([[2, 1], [1, 1]]);
        assert_eq!(IntPolynomial::char_poly(&cat), p(&[1, -3, 1]));
    }

    #[test]
    fn char_poly_three_by_three() {
        // upper triangular: (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let m = IntMatrix::from_i64([[1, 5, 7], [0, 2, -4], [0, 0, 3]]);
        assert_eq!(IntPolynomial::char_poly(&m), p(&[-6, 11, -6, 1]));
    }

    #[test]
    fn companion_examples() {
        assert_eq!(p(&[-5, 1]).companion_matrix().unwrap(), IntMatrix::from_i64([[5]]));
        assert_eq!(p(&[1, -3, 1]).companion_matrix().unwrap(), IntMatrix::from_i64([[0, -1], [1, 3]]));
        assert_eq!(p(&[-1, -1, 1]).companion_matrix().unwrap(), IntMatrix::from_i64([[0, 1], [1, 1]]));
        assert_eq!(p(&[1, 2]).companion_matrix().unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn self_reciprocity_examples() {
        let one = BigInt::one();
        assert!(p(&[1, -3, 1]).is_self_reciprocal(&one).unwrap());
        assert!(!p(&[-1, -1, 1]).is_self_reciprocal(&-one.clone()).unwrap());
        let cubic = p(&[-1, 2, -2, 1]);
        assert!(cubic.is_self_reciprocal(&one).unwrap());
        assert!(cubic.eval(&one).is_zero());
        assert!(p(&[1, -3, 1]).is_self_reciprocal(&BigInt::from(2)).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[-2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 2])), Some(p(&[2])));
        assert_eq!(p(&[1, 2]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(p(&[1, -3, 1]).to_string(), "x^2 - 3x + 1");
        assert_eq!(p(&[0]).to_string(), "0");
    }
}
