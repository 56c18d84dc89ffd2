//! Factorization of integer polynomials of small degree.
//!
//! Linear factors come from the rational root test. Higher-degree factors
//! are found by Kronecker's method: a factor `g` of degree `k` is pinned down
//! by its leading coefficient (a divisor of the leading coefficient of `f`)
//! and its values at `k` integer points, each of which must divide the
//! corresponding value of `f`. Candidates whose coefficients exceed the
//! Cauchy-type bound for factors of `f` are discarded before trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 8;

/// Irreducible factors with multiplicities. The product of the factors equals
/// the input up to sign; the integer content is split into prime constants.
pub fn factor_over_z(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, usize)>> {
    factor_over_z_with_cap(p, DEFAULT_DEGREE_CAP)
}

pub fn factor_over_z_with_cap(p: &IntPolynomial, cap: usize) -> Result<Vec<(IntPolynomial, usize)>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > cap {
        return Err(Error::UnsupportedDegree { degree: deg, cap });
    }
    let content = p.content();
    let mut factors: Vec<IntPolynomial> = Vec::new();
    for prime in prime_factors(&content) {
        factors.push(IntPolynomial::constant(prime));
    }
    let mut f = p.div_exact(&IntPolynomial::constant(content)).expect("content divides").with_positive_leading();

    while let Some(lin) = find_linear_factor(&f) {
        f = f.div_exact(&lin).expect("linear factor divides");
        factors.push(lin);
    }

    let mut k = 2;
    while let Some(d) = f.degree() {
        if 2 * k > d {
            break;
        }
        match find_factor_of_degree(&f, k) {
            Some(g) => {
                f = f.div_exact(&g).expect("factor divides");
                factors.push(g);
            }
            None => k += 1,
        }
    }
    if f.degree().is_some_and(|d| d > 0) {
        factors.push(f);
    }

    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    let mut grouped: Vec<(IntPolynomial, usize)> = Vec::new();
    for g in factors {
        match grouped.last_mut() {
            Some((last, m)) if *last == g => *m += 1,
            _ => grouped.push((g, 1)),
        }
    }
    Ok(grouped)
}

/// True iff `p` is irreducible over the integers (and not a unit or constant).
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    let f = factor_over_z(p)?;
    Ok(f.len() == 1 && f[0].1 == 1 && f[0].0.degree() == p.degree() && p.degree() >= Some(1))
}

/// Multiply factors back together.
pub fn expand(factors: &[(IntPolynomial, usize)]) -> IntPolynomial {
    factors.iter().fold(IntPolynomial::constant(BigInt::one()), |acc, (g, m)| &acc * &g.pow(*m))
}

fn find_linear_factor(f: &IntPolynomial) -> Option<IntPolynomial> {
    if f.degree()? < 1 {
        return None;
    }
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Some(IntPolynomial::from_i64(&[0, 1]));
    }
    let lead = f.leading();
    for b in positive_divisors(&lead) {
        for a in positive_divisors(&c0) {
            if !a.gcd(&b).is_one() {
                continue;
            }
            for a in [a.clone(), -a] {
                let cand = IntPolynomial::new(vec![-a, b.clone()]);
                if f.div_exact(&cand).is_some() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// A factor of degree exactly `k` with positive leading coefficient, if any.
/// `f` must have no rational roots.
fn find_factor_of_degree(f: &IntPolynomial, k: usize) -> Option<IntPolynomial> {
    let lead = f.leading();
    let bounds = coefficient_bounds(f, k);

    // evaluation points with the fewest divisors keep the candidate count low
    let mut pts: Vec<(usize, BigInt, BigInt)> = (-12i64..=12)
        .map(|x| {
            let x = BigInt::from(x);
            let v = f.eval(&x);
            (positive_divisors(&v).len(), x, v)
        })
        .collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.abs().cmp(&b.1.abs())).then(a.1.cmp(&b.1)));
    pts.truncate(k);
    let xs: Vec<BigInt> = pts.iter().map(|p| p.1.clone()).collect();
    let choices: Vec<Vec<BigInt>> =
        pts.iter().map(|p| positive_divisors(&p.2).into_iter().flat_map(|d| [d.clone(), -d]).collect()).collect();
    let interp = Interpolator::new(&xs);

    for a in positive_divisors(&lead) {
        let mut values = Vec::with_capacity(k);
        if let Some(g) = search_values(f, k, &a, &xs, &choices, &interp, &bounds, &mut values) {
            return Some(g);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn search_values(
    f: &IntPolynomial,
    k: usize,
    a: &BigInt,
    xs: &[BigInt],
    choices: &[Vec<BigInt>],
    interp: &Interpolator,
    bounds: &[BigInt],
    values: &mut Vec<BigInt>,
) -> Option<IntPolynomial> {
    let i = values.len();
    if i == k {
        // g = a x^k + h with h(x_i) = v_i - a x_i^k
        let ys: Vec<BigInt> = values.iter().zip(xs).map(|(v, x)| v - a * num_traits::pow(x.clone(), k)).collect();
        let mut h = interp.interpolate(&ys)?;
        h.resize(k + 1, BigInt::zero());
        h[k] = a.clone();
        if h.iter().zip(bounds).any(|(c, b)| c.abs() > b * a) {
            return None;
        }
        let g = IntPolynomial::new(h);
        return f.div_exact(&g).map(|_| g);
    }
    for v in &choices[i] {
        values.push(v.clone());
        let found = search_values(f, k, a, xs, choices, interp, bounds, values);
        values.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Bound on `|g_j| / lc(g)` for a degree-`k` factor `g` of `f`: every root of
/// `g` is a root of `f`, so `|root| <= B` (Cauchy) and `|g_j| <= C(k,j) B^(k-j)`.
fn coefficient_bounds(f: &IntPolynomial, k: usize) -> Vec<BigInt> {
    let lead = f.leading().abs();
    let max_ratio = f.coeffs()[..f.coeffs().len() - 1]
        .iter()
        .map(|c| BigRational::new(c.abs(), lead.clone()))
        .max()
        .unwrap_or_else(BigRational::zero);
    let cauchy = (max_ratio + BigRational::one()).ceil().to_integer();
    (0..=k).map(|j| binomial(k, j) * num_traits::pow(cauchy.clone(), k - j)).collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Lagrange interpolation on a fixed node set, with integer bookkeeping.
struct Interpolator {
    /// numerator polynomials prod_{j != i} (x - x_j)
    basis: Vec<Vec<BigInt>>,
    /// prod_{j != i} (x_i - x_j)
    denoms: Vec<BigInt>,
}

impl Interpolator {
    fn new(xs: &[BigInt]) -> Self {
        let mut basis = Vec::new();
        let mut denoms = Vec::new();
        for (i, xi) in xs.iter().enumerate() {
            let mut num = IntPolynomial::constant(BigInt::one());
            let mut den = BigInt::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    num = &num * &IntPolynomial::linear_root(xj.clone());
                    den *= xi - xj;
                }
            }
            let mut c = num.coeffs().to_vec();
            c.resize(xs.len().max(1), BigInt::zero());
            basis.push(c);
            denoms.push(den);
        }
        Interpolator { basis, denoms }
    }

    /// Integer coefficients of the interpolant, or `None` if not integral.
    fn interpolate(&self, ys: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = ys.len();
        let common = self.denoms.iter().fold(BigInt::one(), |l, d| l.lcm(d));
        let mut acc = vec![BigInt::zero(); n.max(1)];
        for ((y, b), d) in ys.iter().zip(&self.basis).zip(&self.denoms) {
            let w = y * (&common / d);
            for (a, c) in acc.iter_mut().zip(b) {
                *a += &w * c;
            }
        }
        acc.into_iter()
            .map(|c| {
                let (q, r) = c.div_rem(&common);
                r.is_zero().then_some(q)
            })
            .collect()
    }
}

/// Positive divisors of `|n|` in increasing order; empty for zero.
pub fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut divs = vec![BigInt::one()];
    let mut rest = n;
    for (p, e) in factorize(&mut rest) {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut q = d.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Prime factors of `|n|` with repetition, in increasing order.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.abs();
    if rest.is_zero() {
        return Vec::new();
    }
    factorize(&mut rest).into_iter().flat_map(|(p, e)| std::iter::repeat_n(p, e)).collect()
}

fn factorize(n: &mut BigInt) -> Vec<(BigInt, usize)> {
    let mut out = Vec::new();
    if let Some(mut v) = n.to_u64() {
        let mut p = 2u64;
        while p.saturating_mul(p) <= v {
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            if e > 0 {
                out.push((BigInt::from(p), e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if v > 1 {
            out.push((BigInt::from(v), 1));
        }
        *n = BigInt::one();
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= *n {
        let mut e = 0;
        while (&*n % &p).is_zero() {
            *n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if *n > BigInt::one() {
        out.push((n.clone(), 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn difference_of_squares() {
        let f = factor_over_z(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn irreducible_examples() {
        assert!(is_irreducible(&p(&[-1, -1, 1])).unwrap());
        assert!(is_irreducible(&p(&[-1, -1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&[1, -2, 1])).unwrap());
    }

    #[test]
    fn quartic_product_of_quadratics() {
        // (x^2 + 1)(x^2 - 3x + 1) has no rational roots
        let a = p(&[1, 0, 1]);
        let b = p(&[1, -3, 1]);
        let f = factor_over_z(&(&a * &b)).unwrap();
        assert_eq!(f, vec![(b, 1), (a, 1)]);
    }

    #[test]
    fn repeated_and_nonmonic() {
        let a = p(&[1, 0, 2]); // 2x^2 + 1
        let b = p(&[-1, 3]); // 3x - 1
        let f = &(&(&a * &a) * &b) * &p(&[6]);
        let got = factor_over_z(&f).unwrap();
        assert_eq!(got, vec![(p(&[2]), 1), (p(&[3]), 1), (p(&[-1, 3]), 1), (p(&[1, 0, 2]), 2)]);
        assert_eq!(expand(&got), f);
    }

    #[test]
    fn degree_cap() {
        let f = p(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor_over_z(&f).unwrap_err(), Error::UnsupportedDegree { degree: 9, cap: 8 });
    }

    #[test]
    fn cyclotomic_octic() {
        // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
        let f = factor_over_z(&p(&[-1, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f[3].0, p(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn divisors() {
        let d: Vec<i64> = positive_divisors(&BigInt::from(-12)).iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert!(positive_divisors(&BigInt::zero()).is_empty());
    }
}
