//! Fundamental units of real quadratic orders via continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest positive solution of `x² − d·y² = norm` with `norm = ±1`
/// (or `±4` for [`order_fundamental_unit`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    #[serde(serialize_with = "crate::num_serde::int")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::num_serde::int")]
    pub y: BigInt,
    pub norm: i8,
}

fn check_domain(d: &BigInt) -> Result<()> {
    if !d.is_positive() || d.sqrt().pow(2) == *d {
        return Err(Error::PellDomain(d.to_string()));
    }
    Ok(())
}

/// Minimal solution of `x² − d·y² = ±1` from the continued fraction of `√d`;
/// the norm is −1 exactly when the period is odd.
pub fn pell_fundamental_unit(d: &BigInt) -> Result<PellSolution> {
    check_domain(d)?;
    let a0 = d.sqrt();
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents p_{k-1}/q_{k-1}, p_k/q_k
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut qq) = (BigInt::zero(), BigInt::one());
    loop {
        let n = &p * &p - d * &qq * &qq;
        if n.abs().is_one() {
            return Ok(PellSolution { x: p, y: qq, norm: if n.is_one() { 1 } else { -1 } });
        }
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut qq, q_next);
    }
}

/// Fundamental unit `(x + y√D)/2` of the quadratic order of discriminant `D`,
/// i.e. the minimal positive solution of `x² − D·y² = ±4`.
///
/// For `D ≡ 0 (mod 4)` this is the Pell unit of `D/4` in disguise. For
/// `D ≡ 1 (mod 4)` the Pell unit of `D` is either the answer or its cube.
pub fn order_fundamental_unit(disc: &BigInt) -> Result<PellSolution> {
    check_domain(disc)?;
    let r = disc.mod_floor(&BigInt::from(4));
    if r.is_zero() {
        let s = pell_fundamental_unit(&(disc / 4))?;
        return Ok(PellSolution { x: s.x * 2, y: s.y, norm: s.norm });
    }
    if !r.is_one() {
        return Err(Error::Malformed(format!("{disc} is not a discriminant (must be 0 or 1 mod 4)")));
    }
    let s = pell_fundamental_unit(disc)?;
    // η = (x + y√D)/2 with η³ = ε: trace relation x³ − 3·N·x = 2·tr-half(ε)
    let n = BigInt::from(s.norm);
    let target: BigInt = &s.x * 2;
    let guess = target.cbrt();
    let lo = (&guess - BigInt::from(2)).max(BigInt::one());
    let mut x = lo;
    while x <= &guess + 2 {
        if &x * &x * &x - BigInt::from(3) * &n * &x == target {
            let y2: BigInt = &x * &x - &n * 4;
            if (&y2 % disc).is_zero() {
                let y2 = y2 / disc;
                let y = y2.sqrt();
                if &y * &y == y2 && y.is_positive() {
                    return Ok(PellSolution { x, y, norm: s.norm });
                }
            }
        }
        x += 1;
    }
    Ok(PellSolution { x: s.x * 2, y: s.y * 2, norm: s.norm })
}
