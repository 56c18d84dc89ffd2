//! The Fibonacci trace map `F(x, y, z) = (y, z, 2yz − x)` on `Q³`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TracePoint {
    #[serde(serialize_with = "crate::num_serde::rational")]
    pub x: BigRational,
    #[serde(serialize_with = "crate::num_serde::rational")]
    pub y: BigRational,
    #[serde(serialize_with = "crate::num_serde::rational")]
    pub z: BigRational,
}

impl TracePoint {
    pub fn new(x: BigRational, y: BigRational, z: BigRational) -> Self {
        TracePoint { x, y, z }
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        TracePoint::new(q(x), q(y), q(z))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [&self.x, &self.y, &self.z].map(|v| v.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for TracePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

pub fn fib_trace_map(p: &TracePoint) -> TracePoint {
    let w = two() * &p.y * &p.z - &p.x;
    TracePoint::new(p.y.clone(), p.z.clone(), w)
}

/// `F⁻¹(x, y, z) = (2xy − z, x, y)`
pub fn fib_trace_map_inverse(p: &TracePoint) -> TracePoint {
    let u = two() * &p.x * &p.y - &p.z;
    TracePoint::new(u, p.x.clone(), p.y.clone())
}

/// `I(x, y, z) = x² + y² + z² − 2xyz − 1`
pub fn fricke_vogt(p: &TracePoint) -> BigRational {
    let TracePoint { x, y, z } = p;
    x * x + y * y + z * z - two() * x * y * z - BigRational::one()
}

/// `(x, y, z) ↦ (z, y, x)`
pub fn coordinate_swap(p: &TracePoint) -> TracePoint {
    TracePoint::new(p.z.clone(), p.y.clone(), p.x.clone())
}

/// Fixed-seed rational sample points with numerators in `[-100, 100]` and
/// denominators in `[1, 100]`.
pub fn sample_points(n: usize, seed: u64) -> Vec<TracePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = || {
        let num: i64 = rng.gen_range(-100..=100);
        let den: i64 = rng.gen_range(1..=100);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    };
    (0..n).map(|_| TracePoint::new(q(), q(), q())).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ReversorReport {
    pub holds: bool,
    pub samples: usize,
    /// First sample where `R∘F∘R ≠ F⁻¹`.
    pub conjugation_failure: Option<TracePoint>,
    /// First sample where `R∘R ≠ id`, if an involution was claimed.
    pub involution_failure: Option<TracePoint>,
}

/// Checks `R∘F∘R = F⁻¹` exactly on every sample, with `R` given together
/// with its inverse, and `R∘R = id` when `involution` is claimed.
pub fn verify_reversor_relation(
    map: impl Fn(&TracePoint) -> TracePoint,
    map_inverse: impl Fn(&TracePoint) -> TracePoint,
    reversor: impl Fn(&TracePoint) -> TracePoint,
    reversor_inverse: impl Fn(&TracePoint) -> TracePoint,
    involution: bool,
    samples: &[TracePoint],
) -> ReversorReport {
    let conjugation_failure = samples.iter().find(|p| reversor(&map(&reversor_inverse(p))) != map_inverse(p)).cloned();
    let involution_failure =
        if involution { samples.iter().find(|p| reversor(&reversor(p)) != **p).cloned() } else { None };
    ReversorReport {
        holds: conjugation_failure.is_none() && involution_failure.is_none(),
        samples: samples.len(),
        conjugation_failure,
        involution_failure,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRecord {
    pub step: usize,
    pub point: TracePoint,
    #[serde(serialize_with = "crate::num_serde::rational")]
    pub invariant: BigRational,
}

/// Forward orbit `p, F(p), …, F^steps(p)` with the invariant at each point.
pub fn orbit(p: &TracePoint, steps: usize) -> Vec<OrbitRecord> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = p.clone();
    for step in 0..=steps {
        let invariant = fricke_vogt(&cur);
        let next = fib_trace_map(&cur);
        out.push(OrbitRecord { step, point: cur, invariant });
        cur = next;
    }
    out
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FloatOrbitRecord {
    pub step: usize,
    pub point: [f64; 3],
    pub invariant: f64,
}

/// Floating-point orbit for exploration output only; values escape to
/// infinity quickly off the bounded set.
pub fn orbit_f64(p: [f64; 3], steps: usize) -> Vec<FloatOrbitRecord> {
    let mut out = Vec::with_capacity(steps + 1);
    let [mut x, mut y, mut z] = p;
    for step in 0..=steps {
        let invariant = x * x + y * y + z * z - 2.0 * x * y * z - 1.0;
        out.push(FloatOrbitRecord { step, point: [x, y, z], invariant });
        (x, y, z) = (y, z, 2.0 * y * z - x);
    }
    out
}

pub fn is_zero_invariant(p: &TracePoint) -> bool {
    fricke_vogt(p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> TracePoint {
        TracePoint::from_i64(x, y, z)
    }

    #[test]
    fn map_examples() {
        assert_eq!(fib_trace_map(&pt(1, 1, 1)), pt(1, 1, 1));
        assert_eq!(fib_trace_map(&pt(0, 0, 0)), pt(0, 0, 0));
        assert_eq!(fib_trace_map(&pt(1, 0, 0)), pt(0, 0, -1));
        assert_eq!(fib_trace_map_inverse(&pt(0, 0, -1)), pt(1, 0, 0));
    }

    #[test]
    fn invariant_examples() {
        assert!(is_zero_invariant(&pt(1, 1, 1)));
        assert_eq!(fricke_vogt(&pt(0, 0, 0)), -BigRational::one());
        assert!(is_zero_invariant(&pt(1, 0, 0)));
        assert!(is_zero_invariant(&fib_trace_map(&pt(1, 0, 0))));
    }

    #[test]
    fn reversor_checks() {
        let samples = sample_points(100, 7);
        let swap = verify_reversor_relation(
            fib_trace_map,
            fib_trace_map_inverse,
            coordinate_swap,
            coordinate_swap,
            true,
            &samples,
        );
        assert!(swap.holds);

        let id = |p: &TracePoint| p.clone();
        let r = verify_reversor_relation(fib_trace_map, fib_trace_map_inverse, id, id, false, &samples);
        assert!(!r.holds);

        let xy = |p: &TracePoint| TracePoint::new(p.y.clone(), p.x.clone(), p.z.clone());
        let r = verify_reversor_relation(fib_trace_map, fib_trace_map_inverse, xy, xy, true, &samples);
        assert!(r.conjugation_failure.is_some());
        // (0,0,1): swap, F, swap gives (1,0,0), but F⁻¹(0,0,1) = (−1,0,0)
        let p = pt(0, 0, 1);
        assert_ne!(xy(&fib_trace_map(&xy(&p))), fib_trace_map_inverse(&p));
    }

    #[test]
    fn orbits() {
        let o = orbit(&pt(1, 0, 0), 5);
        assert_eq!(o.len(), 6);
        assert!(o.iter().all(|r| r.invariant.is_zero()));
        let f = orbit_f64([0.5, 0.25, 0.125], 3);
        let exact = orbit(
            &TracePoint::new(
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 4.into()),
                BigRational::new(1.into(), 8.into()),
            ),
            3,
        );
        for (a, b) in f.iter().zip(&exact) {
            assert!((a.invariant - b.invariant.to_f64().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(sample_points(5, 1), sample_points(5, 1));
        assert_ne!(sample_points(5, 1), sample_points(5, 2));
    }
}
