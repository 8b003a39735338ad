//! Points of the torus `T^r = R^r / Z^r` and the endomorphisms `x -> E x`.
//!
//! [`TorusPoint`] stores each coordinate as a 64-bit binary fraction, so
//! integer linear maps and integer frequency pairings are computed exactly
//! modulo 1 by wrapping arithmetic. [`FixedPointTorusPoint`] carries `P`
//! bits for orbits whose digits must survive many expanding steps.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

const TWO_POW_64: f64 = 18446744073709551616.0;

/// `e(t) = exp(-2 pi i t)` for `t = phase / 2^64`.
pub fn e_phase(phase: u64) -> Complex<f64> {
    // signed reading keeps the angle in [-pi, pi) for accuracy near 0
    let t = phase as i64 as f64 / TWO_POW_64;
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex::new(c, -s)
}

/// `e(t)` for real `t`.
pub fn e(t: f64) -> Complex<f64> {
    let (s, c) = (std::f64::consts::TAU * (t - t.round())).sin_cos();
    Complex::new(c, -s)
}

fn bigint_mod_2_64(x: &BigInt) -> u64 {
    let low = x.magnitude().iter_u64_digits().next().unwrap_or(0);
    if x.sign() == Sign::Minus {
        low.wrapping_neg()
    } else {
        low
    }
}

/// Integer matrix reduced modulo `2^64`, acting on [`TorusPoint`]s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrappingMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl WrappingMatrix {
    pub fn new(e: &IntMatrix) -> Self {
        let d = e.dim();
        let data = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| bigint_mod_2_64(e.get(i, j))).collect();
        WrappingMatrix { dim: d, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &TorusPoint) -> TorusPoint {
        let d = self.dim;
        TorusPoint {
            coords: (0..d)
                .map(|i| {
                    self.data[i * d..(i + 1) * d]
                        .iter()
                        .zip(&x.coords)
                        .fold(0u64, |acc, (a, b)| acc.wrapping_add(a.wrapping_mul(*b)))
                })
                .collect(),
        }
    }
}

/// Torus point with 64-bit binary-fraction coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<u64>,
}

impl TorusPoint {
    pub fn zero(r: usize) -> Self {
        TorusPoint { coords: vec![0; r] }
    }

    pub fn from_raw(coords: Vec<u64>) -> Self {
        TorusPoint { coords }
    }

    /// Reduces each coordinate mod 1 and rounds to the nearest `2^-64`.
    pub fn from_f64(x: &[f64]) -> Self {
        TorusPoint {
            coords: x
                .iter()
                .map(|&t| {
                    let f = t - t.floor();
                    let hi = (f * 4294967296.0).floor();
                    let lo = ((f * 4294967296.0 - hi) * 4294967296.0).round();
                    ((hi as u64) << 32).wrapping_add(lo as u64)
                })
                .collect(),
        }
    }

    pub fn raw(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| c as f64 / TWO_POW_64).collect()
    }

    /// `<f, x> mod 1` as a 64-bit fraction.
    pub fn phase(&self, freq: &[i64]) -> u64 {
        freq.iter()
            .zip(&self.coords)
            .fold(0u64, |acc, (&f, &x)| acc.wrapping_add((f as u64).wrapping_mul(x)))
    }

    pub fn apply(&self, e: &IntMatrix) -> Result<Self> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: e.dim(), found: self.dim() });
        }
        Ok(WrappingMatrix::new(e).apply(self))
    }
}

/// Torus point with `bits`-bit fixed-point coordinates `c / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPointTorusPoint {
    bits: u32,
    coords: Vec<BigUint>,
}

impl FixedPointTorusPoint {
    pub fn new(bits: u32, coords: Vec<BigUint>) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidArgument("fixed-point precision must be at least 64 bits".into()));
        }
        if let Some(c) = coords.iter().find(|c| c.bits() > bits as u64) {
            return Err(Error::InvalidArgument(format!("coordinate {c} does not fit in {bits} bits")));
        }
        Ok(FixedPointTorusPoint { bits, coords })
    }

    pub fn zero(bits: u32, r: usize) -> Result<Self> {
        Self::new(bits, vec![BigUint::zero(); r])
    }

    /// Truncation of rational coordinates (reduced mod 1) to `bits` bits.
    pub fn from_rationals(bits: u32, x: &[BigRational]) -> Result<Self> {
        let scale = BigInt::one() << bits;
        let coords = x
            .iter()
            .map(|q| {
                let f = q - q.floor();
                (f * BigRational::from_integer(scale.clone())).floor().to_integer().to_biguint().unwrap_or_default()
            })
            .collect();
        Self::new(bits, coords)
    }

    /// The point `omega * h mod 1` for a fixed-point scalar `omega` and an
    /// integer vector `h`.
    pub fn scaled(bits: u32, omega: &BigUint, h: &[BigInt]) -> Result<Self> {
        let modulus = BigInt::one() << bits;
        let om = BigInt::from(omega.clone());
        let coords = h.iter().map(|hi| reduce(&(hi * &om), &modulus)).collect();
        Self::new(bits, coords)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Exact image under `x -> E x mod 1`.
    pub fn apply(&self, e: &IntMatrix) -> Result<Self> {
        let d = self.dim();
        if e.dim() != d {
            return Err(Error::DimensionMismatch { expected: e.dim(), found: d });
        }
        let modulus = BigInt::one() << self.bits;
        let x: Vec<BigInt> = self.coords.iter().map(|c| BigInt::from(c.clone())).collect();
        let coords = (0..d)
            .map(|i| {
                let s: BigInt = e.row(i).iter().zip(&x).map(|(a, b)| a * b).sum();
                reduce(&s, &modulus)
            })
            .collect();
        Ok(FixedPointTorusPoint { bits: self.bits, coords })
    }

    /// The leading 64 bits of every coordinate.
    pub fn leading(&self) -> TorusPoint {
        let shift = self.bits - 64;
        TorusPoint {
            coords: self.coords.iter().map(|c| (c >> shift).to_u64().unwrap_or(0)).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.leading().to_f64()
    }
}

fn reduce(x: &BigInt, modulus: &BigInt) -> BigUint {
    let mut r = x % modulus;
    if r.is_negative() {
        r += modulus;
    }
    r.to_biguint().unwrap_or_default()
}

/// Bits needed so that `steps` applications of `E` keep 64 accurate leading
/// bits of a truncated real point: each step loses at most
/// `ceil(log2(d^2 max|E_ij|))` bits.
pub fn required_bits(e: &IntMatrix, steps: u64) -> u64 {
    let d = e.dim() as u64;
    let max = e.max_abs_entry().to_u64().unwrap_or(u64::MAX).max(1);
    let growth = (d * d).saturating_mul(max).max(1);
    let per_step = 64 - (growth - 1).leading_zeros() as u64;
    steps.saturating_mul(per_step).saturating_add(64)
}
