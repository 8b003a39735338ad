use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

use super::roots::{dd_abs, roots_numeric, DdComplex, RootBox};
use super::IntPoly;

const MAX_SUBSETS: u64 = 1 << 22;

fn round_dd(x: TwoFloat) -> Option<BigInt> {
    let rh = x.hi().round();
    let rest = ((x.hi() - rh) + x.lo()).round();
    Some(BigInt::from_f64(rh)? + BigInt::from_f64(rest)?)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    match n.to_u64() {
        Some(v) if v <= 1_000_000_000_000 => {
            let mut out = Vec::new();
            let mut d = 1u64;
            while d * d <= v {
                if v % d == 0 {
                    out.push(BigInt::from(d));
                    if d * d != v {
                        out.push(BigInt::from(v / d));
                    }
                }
                d += 1;
            }
            out.sort();
            out
        }
        _ => vec![BigInt::from(1), n],
    }
}

/// Product `prod (x - z)` in double-double, constant term first.
fn product_poly(roots: &[DdComplex]) -> Vec<DdComplex> {
    let zero = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    let one = Complex::new(TwoFloat::from(1.0), TwoFloat::from(0.0));
    let mut c = vec![one];
    for z in roots {
        let mut next = vec![zero; c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = next[i + 1] + *a;
            next[i] = next[i] - *a * *z;
        }
        c = next;
    }
    c
}

/// Integer polynomial `t * prod (x - z)` if its coefficients round cleanly.
fn round_candidate(c: &[DdComplex], t: &BigInt) -> Option<IntPoly> {
    let tf = t.to_f64()?;
    let mut out = Vec::with_capacity(c.len());
    for a in c {
        let re = a.re * tf;
        let im = a.im * tf;
        let scale = 1.0 + re.hi().abs();
        if im.hi().abs() > 1e-6 * scale {
            return None;
        }
        let k = round_dd(re)?;
        let err = (re - TwoFloat::from(k.to_f64()?)).hi().abs();
        if err > 1e-6 * scale {
            return None;
        }
        out.push(k);
    }
    Some(IntPoly::new(out))
}

/// Irreducible factor of `p` over `Q` that vanishes at the root isolated by `b`.
///
/// Subsets of the remaining roots are tried in order of size; each candidate
/// product is rounded to integers and accepted only if it divides `p` exactly.
pub fn minimal_poly_of_root(p: &IntPoly, b: &RootBox) -> Result<IntPoly> {
    if p.is_constant() {
        return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
    }
    let q = p.squarefree_part();
    let roots = roots_numeric(&q, 1e-12).or_else(|_| roots_numeric(&q, f64::INFINITY))?;
    let target = b.center;
    let (idx, dist) = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (i, crate::poly::roots::dd_abs(&(r.center - target)).hi()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or(Error::FactorNotFound)?;
    if dist > b.radius + roots[idx].radius + 1e-9 * (1.0 + dd_abs(&target).hi()) {
        return Err(Error::InvalidArgument("box does not isolate a root of the polynomial".into()));
    }
    let others: Vec<DdComplex> =
        roots.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, r)| r.center).collect();
    let m = others.len();
    if m >= 63 || (1u64 << m) > MAX_SUBSETS {
        return Err(Error::InvalidArgument(format!("degree {} too large for subset reconstruction", q.deg())));
    }
    let lcs = divisors(&q.lc());
    let mut masks: Vec<u64> = (0..(1u64 << m)).collect();
    masks.sort_by_key(|x| (x.count_ones(), *x));
    for mask in masks {
        let mut set = vec![roots[idx].center];
        set.extend((0..m).filter(|j| mask >> j & 1 == 1).map(|j| others[j]));
        let prod = product_poly(&set);
        for t in &lcs {
            if let Some(f) = round_candidate(&prod, t) {
                let f = f.primitive_part();
                if f.deg() == set.len() && q.div_exact(&f).is_some() {
                    return Ok(f);
                }
            }
        }
    }
    Err(Error::FactorNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn boxes(p: &IntPoly) -> Vec<RootBox> {
        roots_numeric(&p.squarefree_part(), 1e-12).unwrap()
    }

    #[test]
    fn golden_factor() {
        let p = IntPoly::from_i64(&[-3, 1]).mul(&IntPoly::from_i64(&[-1, -1, 1]));
        let b = boxes(&p);
        let golden = b.iter().find(|x| (x.re() - 1.618).abs() < 0.01).unwrap();
        let f = minimal_poly_of_root(&p, golden).unwrap();
        assert_eq!(f, IntPoly::from_i64(&[-1, -1, 1]));
        let three = b.iter().find(|x| x.exact).unwrap();
        assert_eq!(minimal_poly_of_root(&p, three).unwrap(), IntPoly::from_i64(&[-3, 1]));
    }

    #[test]
    fn irreducible_is_itself() {
        let p = IntPoly::from_i64(&[-2, 0, 0, 1]);
        let b = boxes(&p);
        assert_eq!(minimal_poly_of_root(&p, &b[0]).unwrap(), p);
    }

    #[test]
    fn non_monic_factor() {
        // (2x - 1)(3x^2 - 2)
        let p = IntPoly::from_i64(&[-1, 2]).mul(&IntPoly::from_i64(&[-2, 0, 3]));
        for b in boxes(&p) {
            let f = minimal_poly_of_root(&p, &b).unwrap();
            assert!(p.div_exact(&f).is_some());
            assert!(f.deg() == 1 || f == IntPoly::from_i64(&[-2, 0, 3]));
        }
    }

    #[test]
    fn perron_factor_vanishes_at_root() {
        let s = IntMatrix::from_i64(&[&[3, 3, 1], &[3, 3, 1], &[0, 8, 0]]);
        let p = s.char_poly();
        let b = boxes(&p);
        let perron = b.iter().find(|x| x.perron).unwrap();
        let f = minimal_poly_of_root(&p, perron).unwrap();
        assert!(p.div_exact(&f).is_some());
        let v: f64 = f.eval_f64(perron.re());
        assert!(v.abs() < 1e-8);
    }
}
