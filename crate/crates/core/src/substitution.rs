//! Substitutions on a finite alphabet `{0, .., d-1}`: parsing, matrices,
//! powers, the primitivity and aperiodicity gates, and three built-in
//! families.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::poly::{minimal_poly_of_root, roots_numeric};

/// Default cap on the length of any rule produced by [`Substitution::power`].
pub const DEFAULT_WORD_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    alphabet_size: usize,
    rules: Vec<Vec<u8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aperiodicity {
    /// The Perron eigenvalue is irrational.
    Aperiodic,
    /// The irrationality criterion does not apply.
    Unknown,
}

impl Substitution {
    pub fn new(alphabet_size: usize, rules: Vec<Vec<u8>>) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::InvalidSubstitution("alphabet must have at least 2 letters".into()));
        }
        if alphabet_size > 256 {
            return Err(Error::InvalidSubstitution("alphabet larger than 256 letters".into()));
        }
        if rules.len() != alphabet_size {
            return Err(Error::InvalidSubstitution(format!(
                "expected {alphabet_size} rules, found {}",
                rules.len()
            )));
        }
        for (b, w) in rules.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidSubstitution(format!("rule for letter {b} is empty")));
            }
            if let Some(&c) = w.iter().find(|&&c| c as usize >= alphabet_size) {
                return Err(Error::InvalidSubstitution(format!(
                    "rule for letter {b} uses letter {c} outside the alphabet"
                )));
            }
        }
        Ok(Substitution { alphabet_size, rules })
    }

    /// Rules given as digit strings, e.g. `["01", "0"]`.
    pub fn from_strs(rules: &[&str]) -> Result<Self> {
        let parsed = rules.iter().map(|r| parse_digits(r)).collect::<Result<Vec<_>>>()?;
        let d = parsed.iter().flatten().map(|&c| c as usize + 1).max().unwrap_or(0).max(rules.len());
        Self::new(d, parsed)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn rules(&self) -> &[Vec<u8>] {
        &self.rules
    }

    pub fn rule(&self, b: usize) -> &[u8] {
        &self.rules[b]
    }

    /// Entry `(i, j)` counts the occurrences of `i` in the image of `j`.
    pub fn substitution_matrix(&self) -> IntMatrix {
        let d = self.alphabet_size;
        let mut m = IntMatrix::zeros(d);
        for (j, w) in self.rules.iter().enumerate() {
            let mut counts = vec![0i64; d];
            for &c in w {
                counts[c as usize] += 1;
            }
            for (i, n) in counts.into_iter().enumerate() {
                m.set(i, j, n.into());
            }
        }
        m
    }

    pub fn apply(&self, word: &[u8]) -> Vec<u8> {
        word.iter().flat_map(|&c| self.rules[c as usize].iter().copied()).collect()
    }

    pub fn power(&self, n: u32) -> Result<Self> {
        self.power_capped(n, DEFAULT_WORD_CAP)
    }

    /// `n`-fold composition, refusing to build any rule longer than `cap`.
    pub fn power_capped(&self, n: u32, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("substitution power must be at least 1".into()));
        }
        // rule lengths of the power are the column sums of S^n
        let s = self.substitution_matrix();
        let sn = s.pow(n);
        for j in 0..self.alphabet_size {
            let len: num_bigint::BigInt = sn.column(j).iter().sum();
            let len: u128 = len.try_into().unwrap_or(u128::MAX);
            if len > cap as u128 {
                return Err(Error::WordLengthCap { length: len, cap });
            }
        }
        let mut rules = self.rules.clone();
        for _ in 1..n {
            rules = rules.iter().map(|w| self.apply(w)).collect();
        }
        Ok(Substitution { alphabet_size: self.alphabet_size, rules })
    }

    pub fn is_primitive(&self) -> bool {
        crate::linalg::is_primitive(&self.substitution_matrix()).unwrap_or(false)
    }

    /// Irrationality of the Perron eigenvalue, a sufficient condition for
    /// aperiodicity of a primitive substitution.
    pub fn aperiodicity_gate(&self) -> Aperiodicity {
        let p = self.substitution_matrix().char_poly();
        let q = p.squarefree_part();
        let Ok(boxes) = roots_numeric(&q, 1e-12) else {
            return Aperiodicity::Unknown;
        };
        let Some(perron) = boxes.iter().find(|b| b.perron) else {
            return Aperiodicity::Unknown;
        };
        match minimal_poly_of_root(&q, perron) {
            Ok(f) if f.deg() >= 2 => Aperiodicity::Aperiodic,
            _ => Aperiodicity::Unknown,
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, w) in self.rules.iter().enumerate() {
            if b > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b} -> ")?;
            if self.alphabet_size <= 10 {
                for c in w {
                    write!(f, "{c}")?;
                }
            } else {
                let s: Vec<String> = w.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", s.join(" "))?;
            }
        }
        Ok(())
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| {
            ch.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("rule {s:?} contains non-digit {ch:?}")))
        })
        .collect()
}

fn parse_binary_word(s: &str, name: &str) -> Result<Vec<u8>> {
    let w = parse_digits(s)?;
    if w.iter().any(|&c| c > 1) {
        return Err(Error::Parse(format!("word {name} must be over {{0,1}}")));
    }
    Ok(w)
}

/// Parameters of the built-in families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    /// `0 -> 0^m 1 2, 1 -> 1^(2m) 0 2, 2 -> 0 1 2 2`, `m >= 3`.
    #[serde(rename = "zeta_m")]
    ZetaM { m: u32 },
    /// `0 -> (01)^m 2, 1 -> 2 (10)^m, 2 -> 1^(2m+2)`, `m >= 1`.
    #[serde(rename = "sigma_m")]
    SigmaM { m: u32 },
    /// `0 -> A 2, 1 -> 2 B, 2 -> 0 2 2` with binary words `A, B` of length `m`.
    #[serde(rename = "zeta_mAB")]
    ZetaMAB {
        m: u32,
        #[serde(rename = "A")]
        a: String,
        #[serde(rename = "B")]
        b: String,
    },
}

impl FamilyParams {
    /// Largest minority-letter count over `A` and `B` (family `zeta_mAB` only).
    pub fn minority_count(&self) -> Option<u64> {
        match self {
            FamilyParams::ZetaMAB { a, b, .. } => {
                let minority = |w: &str| {
                    let ones = w.chars().filter(|&c| c == '1').count() as u64;
                    ones.min(w.len() as u64 - ones)
                };
                Some(minority(a).max(minority(b)))
            }
            _ => None,
        }
    }
}

pub fn make_family(params: &FamilyParams) -> Result<Substitution> {
    let rep = |c: u8, n: usize| std::iter::repeat(c).take(n);
    match params {
        &FamilyParams::ZetaM { m } => {
            if m < 3 {
                return Err(Error::FamilyConstraint(format!("m >= 3 (got m = {m})")));
            }
            let m = m as usize;
            Substitution::new(
                3,
                vec![
                    rep(0, m).chain([1, 2]).collect(),
                    rep(1, 2 * m).chain([0, 2]).collect(),
                    vec![0, 1, 2, 2],
                ],
            )
        }
        &FamilyParams::SigmaM { m } => {
            if m < 1 {
                return Err(Error::FamilyConstraint("m >= 1 (got m = 0)".into()));
            }
            let m = m as usize;
            Substitution::new(
                3,
                vec![
                    [0, 1].repeat(m).into_iter().chain([2]).collect(),
                    std::iter::once(2).chain([1, 0].repeat(m)).collect(),
                    rep(1, 2 * m + 2).collect(),
                ],
            )
        }
        FamilyParams::ZetaMAB { m, a, b } => {
            let wa = parse_binary_word(a, "A")?;
            let wb = parse_binary_word(b, "B")?;
            let m = *m as usize;
            if wa.len() != m || wb.len() != m {
                return Err(Error::FamilyConstraint(format!(
                    "|A| = |B| = m (got |A| = {}, |B| = {}, m = {m})",
                    wa.len(),
                    wb.len()
                )));
            }
            if wa.iter().all(|&c| c == 0) {
                return Err(Error::FamilyConstraint("A != 0^m".into()));
            }
            let k = params.minority_count().unwrap_or(0);
            let need = 8 * k * k + 8 * k + 14;
            if need > m as u64 {
                return Err(Error::FamilyConstraint(format!(
                    "8k^2 + 8k + 14 <= m (k = {k}: {need} > {m})"
                )));
            }
            Substitution::new(
                3,
                vec![
                    wa.into_iter().chain([2]).collect(),
                    std::iter::once(2).chain(wb).collect(),
                    vec![0, 2, 2],
                ],
            )
        }
    }
}

/// Parses either `{"alphabet_size": d, "rules": [...]}` (rules as integer
/// arrays, or digit strings when `d <= 10`) or a family shorthand such as
/// `{"family": "zeta_m", "m": 20}`.
pub fn parse_substitution(input: &Value) -> Result<(Substitution, Option<FamilyParams>)> {
    if input.get("family").is_some() {
        let params: FamilyParams =
            serde_json::from_value(input.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok((make_family(&params)?, Some(params)));
    }
    let d = input
        .get("alphabet_size")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field \"alphabet_size\"".into()))? as usize;
    let rules = input
        .get("rules")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"rules\"".into()))?;
    let mut parsed = Vec::with_capacity(rules.len());
    for r in rules {
        let word = match r {
            Value::String(s) => {
                if d > 10 {
                    return Err(Error::Parse("digit-string rules need an alphabet of at most 10 letters".into()));
                }
                parse_digits(s)?
            }
            Value::Array(a) => a
                .iter()
                .map(|x| {
                    x.as_u64()
                        .filter(|&c| c < 256)
                        .map(|c| c as u8)
                        .ok_or_else(|| Error::Parse(format!("invalid letter {x}")))
                })
                .collect::<Result<Vec<u8>>>()?,
            other => return Err(Error::Parse(format!("rule must be an array or a string, got {other}"))),
        };
        parsed.push(word);
    }
    Ok((Substitution::new(d, parsed)?, None))
}
