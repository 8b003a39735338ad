//! Counter-based randomness and order-independent averaging.
//!
//! Every random draw is keyed by `(seed, index)`: sample `i` always sees the
//! same stream regardless of which thread computes it.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::torus::{FixedPointTorusPoint, TorusPoint};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform_torus(rng: &mut impl Rng, r: usize) -> TorusPoint {
    TorusPoint::from_raw((0..r).map(|_| rng.gen()).collect())
}

/// Uniform `bits`-bit fixed-point scalar in `[0, 1)`.
pub fn uniform_fraction(rng: &mut impl Rng, bits: u32) -> BigUint {
    let words = (bits as usize).div_ceil(32);
    let digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let x = BigUint::from_slice(&digits);
    let excess = words as u32 * 32 - bits;
    x >> excess
}

pub fn uniform_fixed_point(rng: &mut impl Rng, bits: u32, r: usize) -> FixedPointTorusPoint {
    let coords = (0..r).map(|_| uniform_fraction(rng, bits)).collect();
    FixedPointTorusPoint::new(bits, coords).expect("coordinates fit by construction")
}

/// Neumaier-compensated sum, evaluated in slice order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = compensated_sum(values) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = compensated_sum(&dev) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
