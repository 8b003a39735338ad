//! JSON encodings shared by every serialized type, and the top-level report.
//!
//! Unbounded integers are written as decimal strings; on input both strings
//! and plain JSON integers are accepted.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Integer parsed from a decimal string or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigIntRepr(pub BigInt);

impl<'de> Deserialize<'de> for BigIntRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BigIntRepr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigIntRepr, E> {
                parse_bigint(v).map(BigIntRepr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Rational parsed from `"p/q"`, `"p"`, or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRepr(pub BigRational);

impl<'de> Deserialize<'de> for RationalRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RationalRepr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string p/q")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RationalRepr, E> {
                Ok(RationalRepr(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RationalRepr, E> {
                Ok(RationalRepr(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalRepr, E> {
                parse_rational(v).map(RationalRepr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim().parse::<BigInt>().map_err(|_| format!("invalid integer {s:?}"))
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_bigint(n)?;
            let d = parse_bigint(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(n, d))
        }
        None => parse_bigint(s).map(BigRational::from_integer),
    }
}

/// Serde adapter for lists of integer column vectors.
pub mod bigint_columns {
    use super::BigIntRepr;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(cols: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> =
            cols.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Vec<BigIntRepr>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|c| c.into_iter().map(|x| x.0).collect()).collect())
    }
}

/// Serde adapter for an integer vector as decimal strings.
pub mod bigint_vec {
    use super::BigIntRepr;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<BigIntRepr> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.0).collect())
    }
}

/// Serde adapter for a single unbounded integer as a decimal string.
pub mod bigint_string {
    use super::BigIntRepr;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Ok(BigIntRepr::deserialize(d)?.0)
    }
}

/// Serde adapter for an optional unbounded integer (string or null).
pub mod opt_bigint_string {
    use super::BigIntRepr;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<BigIntRepr>::deserialize(d)?.map(|x| x.0))
    }
}

/// Serde adapter for a rational as `"p/q"`.
pub mod rational_string {
    use super::RationalRepr;
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        Ok(RationalRepr::deserialize(d)?.0)
    }
}

/// Top-level document emitted by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input: serde_json::Value,
    pub results: serde_json::Value,
    /// Wall-clock milliseconds per stage; excluded from determinism checks.
    pub timing_ms: BTreeMap<String, u64>,
    /// Every seed that fed a random stream, keyed by its use.
    pub seeds: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, input: serde_json::Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input,
            results: serde_json::Value::Null,
            timing_ms: BTreeMap::new(),
            seeds: BTreeMap::new(),
        }
    }
}
