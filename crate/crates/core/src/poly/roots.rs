//! Root isolation: Aberth–Ehrlich in `f64`, refined in double-double, with an
//! a posteriori inclusion radius and disjointness check.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

use super::IntPoly;

pub type DdComplex = Complex<TwoFloat>;

/// Unit roundoff of double-double arithmetic (conservative).
const DD_EPS: f64 = 1e-31;
const F64_ITERS: usize = 2000;
const DD_ITERS: usize = 40;

/// A disk `|z - center| <= radius` containing exactly one root.
#[derive(Clone, Debug)]
pub struct RootBox {
    pub center: DdComplex,
    pub radius: f64,
    /// Largest-modulus root, real and positive.
    pub perron: bool,
    /// The center is the root itself (integer roots).
    pub exact: bool,
}

impl RootBox {
    pub fn re(&self) -> f64 {
        self.center.re.hi() + self.center.re.lo()
    }

    pub fn im(&self) -> f64 {
        self.center.im.hi() + self.center.im.lo()
    }

    pub fn is_real(&self) -> bool {
        self.center.im == TwoFloat::from(0.0)
    }

    pub fn modulus(&self) -> f64 {
        self.re().hypot(self.im())
    }

    pub fn contains(&self, z: Complex<f64>) -> bool {
        (z - Complex::new(self.re(), self.im())).norm() <= self.radius
    }

    /// Real interval `[lo, hi]` enclosing a real root.
    pub fn real_interval(&self) -> (f64, f64) {
        let c = self.re();
        let slack = c.abs() * f64::EPSILON;
        (c - self.radius - slack, c + self.radius + slack)
    }
}

impl Serialize for RootBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootBox", 5)?;
        st.serialize_field("re", &self.re())?;
        st.serialize_field("im", &self.im())?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("perron", &self.perron)?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

pub(crate) fn dd_from_bigint(c: &BigInt) -> TwoFloat {
    let hi = c.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return TwoFloat::from(hi);
    }
    let rest = c - BigInt::from_f64(hi).unwrap_or_default();
    TwoFloat::new_add(hi, rest.to_f64().unwrap_or(0.0))
}

pub(crate) fn dd_abs(z: &DdComplex) -> TwoFloat {
    (z.re * z.re + z.im * z.im).sqrt()
}

fn dd_to_f64(x: TwoFloat) -> f64 {
    x.hi() + x.lo()
}

struct DdPoly {
    c: Vec<TwoFloat>,
    abs: Vec<f64>,
}

impl DdPoly {
    fn new(p: &IntPoly) -> Self {
        let c: Vec<TwoFloat> = p.coeffs().iter().map(dd_from_bigint).collect();
        let abs = p.coeffs().iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).collect();
        DdPoly { c, abs }
    }

    /// `(p(z), p'(z))` by Horner.
    fn eval(&self, z: &DdComplex) -> (DdComplex, DdComplex) {
        let zero = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
        let mut p = zero;
        let mut dp = zero;
        for c in self.c.iter().rev() {
            dp = dp * *z + p;
            p = p * *z + Complex::new(*c, TwoFloat::from(0.0));
        }
        (p, dp)
    }

    fn error_bound(&self, r: f64) -> f64 {
        let n = self.abs.len() as f64;
        let mag = self.abs.iter().rev().fold(0.0, |acc, a| acc * r + a);
        4.0 * n * DD_EPS * mag
    }
}

fn eval_f64(c: &[f64], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth_f64(c: &[f64]) -> Vec<Complex<f64>> {
    let n = c.len() - 1;
    let lc = c[n];
    let cauchy = 1.0 + c[..n].iter().map(|a| (a / lc).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| Complex::from_polar(cauchy, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..F64_ITERS {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_f64(c, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex<f64> = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn refine_dd(p: &DdPoly, z: &mut [DdComplex]) {
    let n = z.len();
    let one = Complex::new(TwoFloat::from(1.0), TwoFloat::from(0.0));
    for _ in 0..DD_ITERS {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, dv) = p.eval(&z[i]);
            if v.re == TwoFloat::from(0.0) && v.im == TwoFloat::from(0.0) {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
            for j in 0..n {
                if j != i {
                    s = s + one / (z[i] - z[j]);
                }
            }
            let w = ratio / (one - ratio * s);
            let wn = dd_to_f64(dd_abs(&w));
            if wn.is_finite() {
                z[i] = z[i] - w;
                moved = moved.max(wn / dd_to_f64(dd_abs(&z[i])).max(1e-300));
            }
        }
        if moved < 1e-30 {
            break;
        }
    }
}

/// Inclusion radii `n |p(z_i)| / (|lc| prod_{j != i} |z_i - z_j|)`.
fn radii(p: &DdPoly, z: &[DdComplex]) -> Vec<f64> {
    let n = z.len();
    let lc = dd_to_f64(p.c[n].abs());
    (0..n)
        .map(|i| {
            let (v, _) = p.eval(&z[i]);
            let err = p.error_bound(dd_to_f64(dd_abs(&z[i])));
            let mut denom = TwoFloat::from(lc);
            for j in 0..n {
                if j != i {
                    denom = denom * dd_abs(&(z[i] - z[j]));
                }
            }
            let r = n as f64 * (dd_to_f64(dd_abs(&v)) + err) / dd_to_f64(denom);
            // allow for rounding in the radius computation itself
            r * (1.0 + 1e-12) + 4.0 * DD_EPS * dd_to_f64(dd_abs(&z[i]))
        })
        .collect()
}

fn disjoint(z: &[DdComplex], r: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if dd_to_f64(dd_abs(&(z[i] - z[j]))) <= r[i] + r[j] {
                return false;
            }
        }
    }
    true
}

/// Isolates every root of a squarefree polynomial.
///
/// Each box has radius at most `target_precision` and the boxes are pairwise
/// disjoint; real roots get real centers and integer roots radius 0.
pub fn roots_numeric(p: &IntPoly, target_precision: f64) -> Result<Vec<RootBox>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no isolated roots".into()));
    }
    let n = p.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dd = DdPoly::new(p);
    let cf: Vec<f64> = dd.c.iter().map(|x| x.hi()).collect();
    let mut z: Vec<DdComplex> = if n == 1 {
        vec![Complex::new(-dd.c[0] / dd.c[1], TwoFloat::from(0.0))]
    } else {
        aberth_f64(&cf)
            .into_iter()
            .map(|w| Complex::new(TwoFloat::from(w.re), TwoFloat::from(w.im)))
            .collect()
    };
    refine_dd(&dd, &mut z);
    let mut r = radii(&dd, &z);
    if !disjoint(&z, &r) {
        return Err(Error::PrecisionUnachieved { achieved: r.iter().cloned().fold(0.0, f64::max) });
    }

    // A disk meeting the real axis whose mirror image avoids every other disk
    // contains its own conjugate root, which is therefore real.
    let mut exact = vec![false; n];
    for i in 0..n {
        let mirror = z[i].conj();
        let isolated = (0..n).all(|j| j == i || dd_to_f64(dd_abs(&(mirror - z[j]))) > r[i] + r[j]);
        if isolated && dd_to_f64(z[i].im.abs()) <= r[i] {
            z[i].im = TwoFloat::from(0.0);
            let k = dd_to_f64(z[i].re).round();
            if k.abs() < 1e15 {
                if let Some(kb) = BigInt::from_f64(k) {
                    if p.eval_int(&kb).is_zero() {
                        z[i].re = TwoFloat::from(k);
                        exact[i] = true;
                    }
                }
            }
        }
    }
    r = radii(&dd, &z);
    for i in 0..n {
        if exact[i] {
            r[i] = 0.0;
        }
    }
    if !disjoint(&z, &r) {
        return Err(Error::PrecisionUnachieved { achieved: r.iter().cloned().fold(0.0, f64::max) });
    }
    let worst = r.iter().cloned().fold(0.0, f64::max);
    if !(worst <= target_precision) {
        return Err(Error::PrecisionUnachieved { achieved: worst });
    }

    let mut boxes: Vec<RootBox> = (0..n)
        .map(|i| RootBox { center: z[i], radius: r[i], perron: false, exact: exact[i] })
        .collect();
    boxes.sort_by(|a, b| {
        b.modulus()
            .partial_cmp(&a.modulus())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.re().partial_cmp(&a.re()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let top = &boxes[0];
    if top.is_real() && top.re() - top.radius > 0.0 {
        let lower = top.re() - top.radius;
        if boxes[1..].iter().all(|b| b.modulus() + b.radius < lower) {
            boxes[0].perron = true;
        }
    }
    Ok(boxes)
}
