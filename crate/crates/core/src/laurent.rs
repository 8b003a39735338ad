//! Sparse multivariate Laurent polynomials with integer coefficients, read
//! as trigonometric polynomials on the torus via `z_j = e(s_j)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::torus::{e_phase, TorusPoint};

pub type Exponent = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Exponent,
    #[serde(with = "crate::report::bigint_string")]
    coeff: BigInt,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    num_vars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentRepr {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| TermRepr { exp: e.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LaurentRepr::deserialize(d)?;
        let mut p = LaurentPoly::zero(r.num_vars);
        for t in r.terms {
            if t.exp.len() != r.num_vars {
                return Err(serde::de::Error::custom("exponent length differs from num_vars"));
            }
            p.add_term(t.exp, t.coeff);
        }
        Ok(p)
    }
}

impl LaurentPoly {
    pub fn zero(num_vars: usize) -> Self {
        LaurentPoly { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigInt::one())
    }

    pub fn monomial(exp: Exponent, c: BigInt) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// `z^w - 1`.
    pub fn monomial_minus_one(w: &[i64]) -> Self {
        let mut p = Self::monomial(w.to_vec(), BigInt::one());
        p.add_term(vec![0; w.len()], -BigInt::one());
        p
    }

    /// `|z^w - 1|^2 = 2 - z^w - z^-w`.
    pub fn abs_sq_monomial_minus_one(w: &[i64]) -> Self {
        Self::monomial_minus_one(w).abs_sq()
    }

    /// `sum_f mult_f z^f`.
    pub fn from_terms<'a>(num_vars: usize, terms: impl IntoIterator<Item = (&'a [i64], u64)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (f, m) in terms {
            p.add_term(f.to_vec(), m.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: BigInt) {
        assert_eq!(exp.len(), self.num_vars, "exponent length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.num_vars])
    }

    /// Constant term of `|self|^2`, i.e. the sum of squared coefficients.
    pub fn sum_sq_coeffs(&self) -> BigInt {
        self.terms.values().map(|c| c * c).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "variable count");
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `z -> z^-1`: the complex conjugate on the torus.
    pub fn conj(&self) -> Self {
        LaurentPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect(),
        }
    }

    pub fn abs_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Coefficient at `e` equals coefficient at `-e` (real-valued on the torus).
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let neg: Exponent = e.iter().map(|x| -x).collect();
            self.terms.get(&neg) == Some(c)
        })
    }

    pub fn eval(&self, s: &TorusPoint) -> Complex<f64> {
        self.terms
            .iter()
            .map(|(e, c)| e_phase(s.phase(e)) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }
}
