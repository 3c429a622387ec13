//! Certified spectral radius brackets for primitive nonnegative matrices.
//!
//! For any entrywise positive vector `x`, `min_i (Mx)_i / x_i ≤ ρ(M) ≤ max_i (Mx)_i / x_i`.
//! The bracket is always evaluated exactly against `M`; the iterate `x` itself
//! only has to be positive, so it is kept in rounded fixed-point form and may be
//! advanced with rounded powers `M^(2^r)` when the spectral gap is small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::boolean::is_primitive;
use super::{IntMatrix, LinalgError};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralBracket {
    #[serde(serialize_with = "rational::serialize")]
    pub low: BigRational,
    #[serde(serialize_with = "rational::serialize")]
    pub high: BigRational,
    /// Number of applications of `M` the final iterate corresponds to.
    pub iterations: u64,
}

impl SpectralBracket {
    pub fn width(&self) -> BigRational {
        &self.high - &self.low
    }

    pub fn low_f64(&self) -> f64 {
        rational::to_f64(&self.low)
    }

    pub fn high_f64(&self) -> f64 {
        rational::to_f64(&self.high)
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational::to_f64(&((&self.low + &self.high) / BigInt::from(2)))
    }

    /// `[ln low, ln high]`, widened by a few ulps so the true logarithm stays inside.
    pub fn log_bracket(&self) -> (f64, f64) {
        let lo = self.low_f64().ln();
        let hi = self.high_f64().ln();
        (lo - 4.0 * f64::EPSILON * lo.abs().max(1.0), hi + 4.0 * f64::EPSILON * hi.abs().max(1.0))
    }

    /// `[low^k, high^k]`.
    pub fn pow(&self, k: i32) -> (BigRational, BigRational) {
        (num_traits::pow(self.low.clone(), k as usize), num_traits::pow(self.high.clone(), k as usize))
    }
}

#[derive(Debug, Clone)]
pub struct SpectralOptions {
    pub tol: BigRational,
    /// Budget in equivalent applications of `M`.
    pub max_iterations: u64,
    /// Fixed-point precision of the iterate; `None` derives it from `tol`.
    pub precision_bits: Option<u64>,
}

impl SpectralOptions {
    pub fn new(tol: BigRational) -> SpectralOptions {
        SpectralOptions { tol, max_iterations: 1 << 40, precision_bits: None }
    }

    fn precision(&self) -> u64 {
        self.precision_bits.unwrap_or_else(|| {
            let inv = (BigRational::one() / &self.tol).ceil().to_integer();
            (2 * inv.bits() + 64).max(128)
        })
    }
}

/// Collatz–Wielandt bracket of `x`: exact `[min (Mx)_i/x_i, max (Mx)_i/x_i]`.
pub fn collatz_wielandt(m: &IntMatrix, x: &[BigInt]) -> (BigRational, BigRational) {
    let y = m.mul_vec(x);
    let mut low: Option<BigRational> = None;
    let mut high: Option<BigRational> = None;
    for (yi, xi) in y.iter().zip(x) {
        let r = BigRational::new(yi.clone(), xi.clone());
        if low.as_ref().is_none_or(|l| &r < l) {
            low = Some(r.clone());
        }
        if high.as_ref().is_none_or(|h| &r > h) {
            high = Some(r);
        }
    }
    (low.unwrap_or_default(), high.unwrap_or_default())
}

/// Shifts all entries right so the largest has at most `bits` bits.
fn rescale(v: &mut [BigInt], bits: u64) {
    let top = v.iter().map(BigInt::bits).max().unwrap_or(0);
    if top > bits {
        let shift = top - bits;
        for e in v.iter_mut() {
            *e = &*e >> shift;
        }
    }
}

fn normalize_vector(mut x: Vec<BigInt>, bits: u64) -> Vec<BigInt> {
    rescale(&mut x, bits);
    for e in x.iter_mut() {
        if !e.is_positive() {
            *e = BigInt::one();
        }
    }
    x
}

fn rounded_square(q: &IntMatrix, bits: u64) -> IntMatrix {
    let sq = q.mul_ref(q);
    let n = sq.order();
    let mut flat: Vec<BigInt> = sq.rows().flat_map(|r| r.iter().cloned()).collect();
    rescale(&mut flat, bits);
    let rows: Vec<Vec<BigInt>> = flat.chunks(n).map(<[BigInt]>::to_vec).collect();
    IntMatrix::from_rows(&rows).expect("square")
}

/// Brackets the spectral radius of a primitive matrix to within `opts.tol`.
pub fn spectral_radius_with(m: &IntMatrix, opts: &SpectralOptions) -> Result<SpectralBracket, LinalgError> {
    if !opts.tol.is_positive() {
        return Err(LinalgError::BadTolerance);
    }
    if !m.is_nonnegative() {
        return Err(LinalgError::Negative);
    }
    if !is_primitive(m) {
        return Err(LinalgError::NotPrimitive);
    }
    let n = m.order();
    let bits = opts.precision();
    let mut x = vec![BigInt::one(); n];
    let (mut low, mut high) = collatz_wielandt(m, &x);
    let mut iterations = 0u64;
    let done = |l: &BigRational, h: &BigRational| h - l <= opts.tol;
    if done(&low, &high) {
        return Ok(SpectralBracket { low, high, iterations });
    }

    // Advance x by q = M^(2^r) (rounded), squaring q after every few steps.
    let mut q = m.clone();
    let mut q_power = 1u64;
    const STEPS_PER_LEVEL: usize = 16;
    loop {
        for _ in 0..STEPS_PER_LEVEL {
            if iterations.saturating_add(q_power) > opts.max_iterations {
                return Err(LinalgError::NotConverged(SpectralBracket { low, high, iterations }));
            }
            x = normalize_vector(q.mul_vec(&x), bits);
            iterations += q_power;
            let (l, h) = collatz_wielandt(m, &x);
            // Each bracket is valid on its own; keep the tightest ends seen.
            if l > low {
                low = l;
            }
            if h < high {
                high = h;
            }
            if done(&low, &high) {
                return Ok(SpectralBracket { low, high, iterations });
            }
        }
        if q_power < (1 << 40) {
            q = rounded_square(&q, bits);
            q_power *= 2;
        }
    }
}

pub fn spectral_radius(m: &IntMatrix, tol: &BigRational) -> Result<SpectralBracket, LinalgError> {
    spectral_radius_with(m, &SpectralOptions::new(tol.clone()))
}
