//! Visible lattice points `V = {(x, y) : gcd(x, y) = 1}` with the
//! convention `gcd(0, k) = |k|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::patch::Point;
use crate::algebra::IntMatrix;
use crate::error::{Error, Result};

pub const SIX_OVER_PI_SQUARED: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);

pub fn is_visible((x, y): Point) -> bool {
    x.gcd(&y) == 1
}

/// Inclusive integer rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl Window {
    pub fn square(n: i64) -> Self {
        Window { x_min: -n, x_max: n, y_min: -n, y_max: n }
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }
}

/// Visible points of the window, sorted by `(y, x)`.
pub fn visible_points(w: Window) -> Vec<Point> {
    (w.y_min..=w.y_max).flat_map(|y| (w.x_min..=w.x_max).map(move |x| (x, y))).filter(|&p| is_visible(p)).collect()
}

/// One `x y` pair per line.
pub fn export_points(points: &[Point]) -> String {
    points.iter().map(|(x, y)| format!("{x} {y}\n")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub n: u64,
    pub count: u64,
    pub total: u64,
    pub density: f64,
    pub deviation: f64,
}

/// Exact count of visible points in `[−N, N]²`, computed row by row.
pub fn visible_density(n: u64) -> DensityReport {
    let n_i = n as i64;
    let count: u64 =
        (-n_i..=n_i).into_par_iter().map(|y| (-n_i..=n_i).filter(|&x| is_visible((x, y))).count() as u64).sum();
    let side = 2 * n + 1;
    let total = side * side;
    let density = count as f64 / total as f64;
    DensityReport { n, count, total, density, deviation: (density - SIX_OVER_PI_SQUARED).abs() }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStep {
    pub n: u64,
    pub deviation: f64,
    pub doubled_deviation: f64,
    /// `|d(2N) − 6/π²| ≤ |d(N) − 6/π²| + band`
    pub within_band: bool,
}

/// Deviation at `N` and `2N` for each `N`.
pub fn density_convergence(ns: &[u64], band: f64) -> Vec<ConvergenceStep> {
    ns.iter()
        .map(|&n| {
            let d = visible_density(n).deviation;
            let d2 = visible_density(2 * n).deviation;
            ConvergenceStep { n, deviation: d, doubled_deviation: d2, within_band: d2 <= d + band }
        })
        .collect()
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

#[derive(Debug, Clone, Serialize)]
pub struct HoleCell {
    pub offset: (u64, u64),
    pub prime: u64,
    #[serde(serialize_with = "crate::num_serde::int_pair")]
    pub point: (BigInt, BigInt),
    #[serde(serialize_with = "crate::num_serde::int")]
    pub gcd: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct HoleReport {
    pub k: u64,
    #[serde(serialize_with = "crate::num_serde::int_pair")]
    pub translation: (BigInt, BigInt),
    #[serde(serialize_with = "crate::num_serde::int")]
    pub modulus: BigInt,
    pub cells: Vec<HoleCell>,
}

/// `(r, m)` with `x ≡ r (mod m)` for all congruences, `0 ≤ r < m`.
fn crt(congruences: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (a, p) in congruences {
        // r + m·t ≡ a (mod p)
        let inv = m.extended_gcd(p).x.mod_floor(p);
        let t = ((a - &r) * inv).mod_floor(p);
        r += &m * t;
        m *= p;
    }
    (r.mod_floor(&m), m)
}

/// A `k×k` block of non-visible points `t + (i, j)`, `0 ≤ i, j < k`.
/// Cell `(i, j)` gets the `(i·k + j)`-th prime `p` and
/// `t ≡ (−i, −j) (mod p)`. Coordinates are taken in `(0, Πp]`.
pub fn find_hole(k: u64) -> Result<HoleReport> {
    if k == 0 {
        return Err(Error::Malformed("hole size must be positive".into()));
    }
    let primes = first_primes((k * k) as usize);
    let mut cx = Vec::new();
    let mut cy = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let p = BigInt::from(primes[(i * k + j) as usize]);
            cx.push((BigInt::from(-(i as i64)), p.clone()));
            cy.push((BigInt::from(-(j as i64)), p));
        }
    }
    let (tx, modulus) = crt(&cx);
    let (ty, _) = crt(&cy);
    let positive = |t: BigInt| if t.is_zero() { modulus.clone() } else { t };
    let translation = (positive(tx), positive(ty));

    let mut cells = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let point = (&translation.0 + i, &translation.1 + j);
            let gcd = point.0.gcd(&point.1);
            let prime = primes[(i * k + j) as usize];
            if gcd.is_one() || !(&gcd % prime).is_zero() {
                return Err(Error::Invariant(format!("hole cell ({i}, {j}) has gcd {gcd}")));
            }
            cells.push(HoleCell { offset: (i, j), prime, point, gcd });
        }
    }
    Ok(HoleReport { k, translation, modulus, cells })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub holds: bool,
    pub checked: u64,
    /// `v ↦ M·v` with `v` visible and `M·v` not, smallest `v` first.
    pub counterexample: Option<(Point, Point)>,
}

fn to_i128(m: &IntMatrix) -> Result<[[i128; 2]; 2]> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: m.dim() });
    }
    let e = |i, j| m.get(i, j).to_i128().ok_or_else(|| Error::Malformed("matrix entries too large".into()));
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

fn invariance_pass(m: [[i128; 2]; 2], n: i64) -> (u64, Option<(Point, Point)>) {
    let w = Window::square(n);
    let key = |((x, y), _): &(Point, Point)| (x.abs() + y.abs(), -x, -y);
    (-n..=n)
        .into_par_iter()
        .map(|y| {
            let mut checked = 0;
            let mut worst: Option<(Point, Point)> = None;
            for x in -n..=n {
                if !is_visible((x, y)) {
                    continue;
                }
                let ix = m[0][0] * x as i128 + m[0][1] * y as i128;
                let iy = m[1][0] * x as i128 + m[1][1] * y as i128;
                let (Ok(ix), Ok(iy)) = (i64::try_from(ix), i64::try_from(iy)) else { continue };
                if !w.contains((ix, iy)) {
                    continue;
                }
                checked += 1;
                if !is_visible((ix, iy)) {
                    let c = ((x, y), (ix, iy));
                    if worst.as_ref().is_none_or(|w| key(&c) < key(w)) {
                        worst = Some(c);
                    }
                }
            }
            (checked, worst)
        })
        .reduce(
            || (0, None),
            |(c1, w1), (c2, w2)| {
                let w = match (w1, w2) {
                    (Some(a), Some(b)) => Some(if key(&a) <= key(&b) { a } else { b }),
                    (a, b) => a.or(b),
                };
                (c1 + c2, w)
            },
        )
}

/// `M·v ∈ V` for every visible `v` with `v, M·v ∈ [−N, N]²`, and likewise
/// for `M⁻¹` when `M` is unimodular.
pub fn gl_invariance_check(m: &IntMatrix, n: i64) -> Result<InvarianceReport> {
    let (mut checked, mut counterexample) = invariance_pass(to_i128(m)?, n);
    if counterexample.is_none() && m.is_unimodular() {
        let (c, w) = invariance_pass(to_i128(&m.inverse()?)?, n);
        checked += c;
        counterexample = w;
    }
    Ok(InvarianceReport { holds: counterexample.is_none(), checked, counterexample })
}

/// Product of `len` random factors from `S = [[0,−1],[1,0]]`,
/// `T = [[1,1],[0,1]]`, `T⁻¹` and `J = [[0,1],[1,0]]`, which generate
/// `GL(2,Z)`.
pub fn random_gl2_product(rng: &mut impl Rng, len: usize) -> IntMatrix {
    let gens = [
        IntMatrix::from_i64([[0, -1], [1, 0]]),
        IntMatrix::from_i64([[1, 1], [0, 1]]),
        IntMatrix::from_i64([[1, -1], [0, 1]]),
        IntMatrix::from_i64([[0, 1], [1, 0]]),
    ];
    (0..len).fold(IntMatrix::identity(2), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())])
}

pub fn is_visible_big(x: &BigInt, y: &BigInt) -> bool {
    x.gcd(y).abs().is_one()
}
