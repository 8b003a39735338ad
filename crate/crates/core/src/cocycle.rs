//! The spectral cocycle as an exact symbol: entry `(b, c)` is the multiset of
//! prefix abelianizations of the positions in `zeta(b)` that hold `c`, so the
//! evaluated entry is `sum e(<f, xi>)` over that multiset.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_complex::Complex;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{IntMatrix, MinimalSubspace};
use crate::substitution::Substitution;
use crate::torus::{e_phase, FixedPointTorusPoint, TorusPoint, WrappingMatrix};

/// One distinct frequency vector and how often it occurs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    pub freq: Vec<i64>,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolMatrix {
    dim: usize,
    num_vars: usize,
    /// Row-major `dim x dim`; each entry sorted by frequency.
    entries: Vec<Vec<Term>>,
}

fn collect(terms: impl IntoIterator<Item = (Vec<i64>, u64)>) -> Vec<Term> {
    let mut map: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for (f, m) in terms {
        *map.entry(f).or_default() += m;
    }
    map.into_iter().map(|(freq, mult)| Term { freq, mult }).collect()
}

pub fn build_symbol(zeta: &Substitution) -> SymbolMatrix {
    let d = zeta.alphabet_size();
    let mut raw: Vec<Vec<(Vec<i64>, u64)>> = vec![Vec::new(); d * d];
    for b in 0..d {
        let mut prefix = vec![0i64; d];
        for &c in zeta.rule(b) {
            raw[b * d + c as usize].push((prefix.clone(), 1));
            prefix[c as usize] += 1;
        }
    }
    SymbolMatrix { dim: d, num_vars: d, entries: raw.into_iter().map(collect).collect() }
}

/// Reads the symbol in lattice-basis coordinates: `f -> G^t f`.
pub fn essential_symbol(sym: &SymbolMatrix, v: &MinimalSubspace) -> Result<SymbolMatrix> {
    if v.ambient_dim != sym.num_vars {
        return Err(Error::DimensionMismatch { expected: sym.num_vars, found: v.ambient_dim });
    }
    let basis: Vec<Vec<i64>> = v
        .lattice_basis
        .iter()
        .map(|g| g.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("lattice basis entries exceed 64 bits".into()))?;
    let entries = sym
        .entries
        .iter()
        .map(|entry| {
            collect(entry.iter().map(|t| {
                let f: Vec<i64> =
                    basis.iter().map(|g| g.iter().zip(&t.freq).map(|(a, b)| a * b).sum()).collect();
                (f, t.mult)
            }))
        })
        .collect();
    Ok(SymbolMatrix { dim: sym.dim, num_vars: v.rank, entries })
}

impl SymbolMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn entry(&self, b: usize, c: usize) -> &[Term] {
        &self.entries[b * self.dim + c]
    }

    /// Total multiplicity of an entry.
    pub fn entry_size(&self, b: usize, c: usize) -> u64 {
        self.entry(b, c).iter().map(|t| t.mult).sum()
    }

    pub fn entry_poly(&self, b: usize, c: usize) -> LaurentPoly {
        LaurentPoly::from_terms(self.num_vars, self.entry(b, c).iter().map(|t| (&t.freq[..], t.mult)))
    }

    pub fn eval(&self, s: &TorusPoint) -> Result<CMatrix> {
        if s.dim() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, found: s.dim() });
        }
        Ok(self.eval_unchecked(s))
    }

    pub(crate) fn eval_unchecked(&self, s: &TorusPoint) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self
                .entries
                .iter()
                .map(|entry| entry.iter().map(|t| e_phase(s.phase(&t.freq)) * t.mult as f64).sum())
                .collect(),
        }
    }

    pub fn eval_f64(&self, s: &[f64]) -> Result<CMatrix> {
        self.eval(&TorusPoint::from_f64(s))
    }

    pub fn eval_fixed(&self, s: &FixedPointTorusPoint) -> Result<CMatrix> {
        self.eval(&s.leading())
    }

    /// Value at the origin: the integer matrix of entry sizes.
    pub fn at_origin(&self) -> IntMatrix {
        let d = self.dim;
        let mut m = IntMatrix::zeros(d);
        for b in 0..d {
            for c in 0..d {
                m.set(b, c, self.entry_size(b, c).into());
            }
        }
        m
    }
}

/// `M(E^(n-1) s) ... M(E s) M(s)`.
pub fn cocycle_product(sym: &SymbolMatrix, e: &IntMatrix, s: &TorusPoint, n: usize) -> Result<CMatrix> {
    if e.dim() != sym.num_vars {
        return Err(Error::DimensionMismatch { expected: sym.num_vars, found: e.dim() });
    }
    if s.dim() != sym.num_vars {
        return Err(Error::DimensionMismatch { expected: sym.num_vars, found: s.dim() });
    }
    if n == 0 {
        return Ok(CMatrix::identity(sym.dim));
    }
    let w = WrappingMatrix::new(e);
    let mut x = s.clone();
    let mut acc = sym.eval_unchecked(&x);
    for _ in 1..n {
        x = w.apply(&x);
        acc = &sym.eval_unchecked(&x) * &acc;
    }
    Ok(acc)
}

/// Small dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex<f64>>,
}

impl CMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::new(1.0, 0.0);
        }
        CMatrix { dim, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let d = m.dim();
        let data = (0..d * d)
            .map(|k| Complex::new(m.get(k / d, k % d).to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        CMatrix { dim: d, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<f64> {
        self.data[i * self.dim + j]
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        for z in &mut self.data {
            *z *= c;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        let d = self.dim;
        let mut data = vec![Complex::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        CMatrix { dim: d, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cyclic_subspace, RatVector};
    use crate::substitution::{make_family, FamilyParams};
    use crate::torus::e;
    use proptest::prelude::*;

    fn terms(v: &[(&[i64], u64)]) -> Vec<Term> {
        v.iter().map(|(f, m)| Term { freq: f.to_vec(), mult: *m }).collect()
    }

    #[test]
    fn worked_example_entries() {
        let z = Substitution::from_strs(&["012", "202", "111"]).unwrap();
        let s = build_symbol(&z);
        assert_eq!(s.entry(1, 2), terms(&[(&[0, 0, 0], 1), (&[1, 0, 1], 1)]).as_slice());
        assert_eq!(s.entry(2, 1), terms(&[(&[0, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 2, 0], 1)]).as_slice());
        assert_eq!(s.at_origin(), z.substitution_matrix().transpose());
    }

    #[test]
    fn fibonacci_symbol() {
        let z = Substitution::from_strs(&["01", "0"]).unwrap();
        let s = build_symbol(&z);
        let xi = [0.3, 0.9];
        let m = s.eval_f64(&xi).unwrap();
        assert!((m.get(0, 0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((m.get(0, 1) - e(0.3)).norm() < 1e-15);
        assert!((m.get(1, 0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(m.get(1, 1), Complex::new(0.0, 0.0));
    }

    #[test]
    fn zeta_m_entries_match_closed_form() {
        let m = 4;
        let s = build_symbol(&make_family(&FamilyParams::ZetaM { m }).unwrap());
        let xi = [0.13, 0.41, 0.77];
        let got = s.eval_f64(&xi).unwrap();
        let (z0, z1, z2) = (e(xi[0]), e(xi[1]), e(xi[2]));
        let geo = |z: Complex<f64>, n: u32| (0..n).map(|k| z.powu(k)).sum::<Complex<f64>>();
        let one = Complex::new(1.0, 0.0);
        let expect = [
            [geo(z0, m), z0.powu(m), z0.powu(m) * z1],
            [z1.powu(2 * m), geo(z1, 2 * m), z0 * z1.powu(2 * m)],
            [one, z0, z0 * z1 * (one + z2)],
        ];
        for b in 0..3 {
            for c in 0..3 {
                assert!((got.get(b, c) - expect[b][c]).norm() < 1e-12, "({b},{c})");
            }
        }
    }

    #[test]
    fn essential_symbol_examples() {
        let z = Substitution::from_strs(&["01", "01"]).unwrap();
        let a = z.substitution_matrix().transpose();
        let v = cyclic_subspace(&a, &RatVector::from_ints(&[1, 1])).unwrap();
        let ess = essential_symbol(&build_symbol(&z), &v).unwrap();
        assert_eq!(ess.num_vars(), 1);
        for b in 0..2 {
            assert_eq!(ess.entry(b, 0), terms(&[(&[0], 1)]).as_slice());
            assert_eq!(ess.entry(b, 1), terms(&[(&[1], 1)]).as_slice());
        }
        let full = MinimalSubspace::full(&a);
        let sym = build_symbol(&z);
        assert_eq!(essential_symbol(&sym, &full).unwrap(), sym);
    }

    #[test]
    fn sigma_essential_is_restriction() {
        let z = make_family(&FamilyParams::SigmaM { m: 3 }).unwrap();
        let a = z.substitution_matrix().transpose();
        let v = cyclic_subspace(&a, &RatVector::from_ints(&[1, 1, 1])).unwrap();
        let sym = build_symbol(&z);
        let ess = essential_symbol(&sym, &v).unwrap();
        let (s0, s1) = (0.217, 0.643);
        let lhs = ess.eval_f64(&[s0, s1]).unwrap();
        let rhs = sym.eval_f64(&[s0, s0, s1]).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn product_at_origin_is_matrix_power() {
        let z = make_family(&FamilyParams::ZetaM { m: 3 }).unwrap();
        let st = z.substitution_matrix().transpose();
        let sym = build_symbol(&z);
        let p = cocycle_product(&sym, &st, &TorusPoint::zero(3), 4).unwrap();
        assert_eq!(p, CMatrix::from_int(&st.pow(4)));
        assert!(cocycle_product(&sym, &IntMatrix::identity(2), &TorusPoint::zero(3), 1).is_err());
    }

    #[test]
    fn json_export() {
        let z = Substitution::from_strs(&["01", "0"]).unwrap();
        let v = serde_json::to_value(build_symbol(&z)).unwrap();
        assert_eq!(v["entries"][1][0], serde_json::json!({"freq": [1, 0], "mult": 1}));
        assert_eq!(v["entries"][2][0], serde_json::json!({"freq": [0, 0], "mult": 1}));
    }

    fn arb_case() -> impl Strategy<Value = (Substitution, Vec<f64>, usize, usize)> {
        (2usize..=3).prop_flat_map(|d| {
            (
                proptest::collection::vec(proptest::collection::vec(0..d as u8, 1..=5), d)
                    .prop_map(move |r| Substitution::new(d, r).unwrap()),
                proptest::collection::vec(0.0f64..1.0, d),
                1usize..=3,
                1usize..=3,
            )
        })
    }

    proptest! {
        #[test]
        fn cocycle_law((z, xi, n, m) in arb_case()) {
            let sym = build_symbol(&z);
            let e = z.substitution_matrix().transpose();
            let s = TorusPoint::from_f64(&xi);
            let total = cocycle_product(&sym, &e, &s, n + m).unwrap();
            let mut x = s.clone();
            for _ in 0..n { x = x.apply(&e).unwrap(); }
            let split = &cocycle_product(&sym, &e, &x, m).unwrap() * &cocycle_product(&sym, &e, &s, n).unwrap();
            let scale = 1.0 + total.frobenius();
            prop_assert!(total.max_abs_diff(&split) <= 1e-9 * scale);
        }

        #[test]
        fn row_occupancy_and_periodicity((z, xi, _n, _m) in arb_case()) {
            let sym = build_symbol(&z);
            for b in 0..z.alphabet_size() {
                let total: u64 = (0..z.alphabet_size()).map(|c| sym.entry_size(b, c)).sum();
                prop_assert_eq!(total as usize, z.rule(b).len());
            }
            let shifted: Vec<f64> = xi.iter().enumerate().map(|(i, x)| x + (i as f64) - 2.0).collect();
            let a = sym.eval_f64(&xi).unwrap();
            let b = sym.eval_f64(&shifted).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }
}
