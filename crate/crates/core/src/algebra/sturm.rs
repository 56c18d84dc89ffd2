use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Real roots and complex-conjugate pairs of a squarefree polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSignature {
    pub n1: usize,
    pub n2: usize,
}

type QPoly = Vec<BigRational>;

fn to_q(p: &IntPolynomial) -> QPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / lb;
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut r);
    r
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

pub fn is_squarefree(p: &IntPolynomial) -> bool {
    if p.degree().unwrap_or(0) == 0 {
        return true;
    }
    gcd(&to_q(p), &to_q(&p.derivative())).len() == 1
}

/// Sturm chain `p, p', -rem(p, p'), …`.
pub fn sturm_chain(p: &IntPolynomial) -> Vec<QPoly> {
    let mut chain = vec![to_q(p)];
    let d = to_q(&p.derivative());
    if d.is_empty() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

fn sign_of(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_between(p: &IntPolynomial, a: &BigRational, b: &BigRational) -> usize {
    let chain = sturm_chain(p);
    let va = sign_changes(chain.iter().map(|q| sign_of(&eval(q, a))));
    let vb = sign_changes(chain.iter().map(|q| sign_of(&eval(q, b))));
    va - vb
}

/// Number of distinct real roots, from the sign pattern of the chain at ±∞.
pub fn count_real_roots(p: &IntPolynomial) -> usize {
    let chain = sturm_chain(p);
    let at_pos = chain.iter().map(|q| sign_of(q.last().expect("nonzero")));
    let at_neg = chain.iter().map(|q| {
        let s = sign_of(q.last().expect("nonzero"));
        if (q.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    });
    sign_changes(at_neg) - sign_changes(at_pos)
}

/// Real/complex root split of a squarefree polynomial.
pub fn root_signature(p: &IntPolynomial) -> Result<RootSignature> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if !is_squarefree(p) {
        return Err(Error::NotSquarefree);
    }
    let n1 = count_real_roots(p);
    debug_assert!((deg - n1) % 2 == 0);
    Ok(RootSignature { n1, n2: (deg - n1) / 2 })
}

/// Cauchy bound `1 + max |a_i / a_n|` on the absolute value of every root.
pub fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let lead = p.leading().abs();
    let n = p.coeffs().len();
    let m = p.coeffs()[..n.saturating_sub(1)]
        .iter()
        .map(|c| BigRational::new(c.abs(), lead.clone()))
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::from_integer(BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn signature_examples() {
        assert_eq!(root_signature(&p(&[1, 0, 1])).unwrap(), RootSignature { n1: 0, n2: 1 });
        assert_eq!(root_signature(&p(&[-1, -1, 1])).unwrap(), RootSignature { n1: 2, n2: 0 });
        assert_eq!(root_signature(&p(&[-1, -1, 0, 1])).unwrap(), RootSignature { n1: 1, n2: 1 });
    }

    #[test]
    fn not_squarefree() {
        assert_eq!(root_signature(&p(&[1, -2, 1])).unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn interval_counts() {
        // roots 1, 2, 3
        let f = p(&[-6, 11, -6, 1]);
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(count_roots_between(&f, &q(0), &q(10)), 3);
        assert_eq!(count_roots_between(&f, &q(1), &q(2)), 1);
        assert_eq!(count_roots_between(&f, &q(0), &q(1)), 1);
        assert_eq!(count_real_roots(&f), 3);
    }

    #[test]
    fn constants_and_linears() {
        assert_eq!(root_signature(&p(&[5])).unwrap(), RootSignature { n1: 0, n2: 0 });
        assert_eq!(root_signature(&p(&[3, 2])).unwrap(), RootSignature { n1: 1, n2: 0 });
    }
}
