//! Reading substitutions and matrix/vector pairs.

use std::io::Read;
use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};
use specto::linalg::{IntMatrix, RatVector};
use specto::report::{parse_rational, BigIntRepr, RationalRepr};
use specto::substitution::{parse_substitution, FamilyParams, Substitution};

use crate::Failure;

/// A substitution given as a JSON file (`-` for stdin), inline JSON, or a
/// family shorthand.
#[derive(Args, Debug, Clone)]
pub struct SubstitutionInput {
    /// JSON file with `alphabet_size` and `rules`, or a family object.
    input: Option<PathBuf>,
    /// Inline JSON instead of a file.
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
    /// Built-in family: zeta_m, sigma_m or zeta_mAB.
    #[arg(long, conflicts_with_all = ["input", "json"])]
    family: Option<String>,
    #[arg(long, requires = "family")]
    m: Option<u32>,
    /// Binary word A of the zeta_mAB family.
    #[arg(long = "A", requires = "family")]
    a: Option<String>,
    /// Binary word B of the zeta_mAB family.
    #[arg(long = "B", requires = "family")]
    b: Option<String>,
}

pub fn read_json(path: Option<&PathBuf>, inline: Option<&String>) -> Result<Value, Failure> {
    let text = match (path, inline) {
        (_, Some(s)) => s.clone(),
        (Some(p), None) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
            s
        }
        (Some(p), None) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        (None, None) => return Err(Failure::Input("no input given (file, --json or --family)".into())),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

impl SubstitutionInput {
    pub fn to_json(&self) -> Result<Value, Failure> {
        match &self.family {
            Some(f) => {
                let m = self.m.ok_or_else(|| Failure::Input("--family needs --m".into()))?;
                let mut v = json!({ "family": f, "m": m });
                if let Some(a) = &self.a {
                    v["A"] = json!(a);
                }
                if let Some(b) = &self.b {
                    v["B"] = json!(b);
                }
                Ok(v)
            }
            None => read_json(self.input.as_ref(), self.json.as_ref()),
        }
    }

    pub fn load(&self) -> Result<(Value, Substitution, Option<FamilyParams>), Failure> {
        let v = self.to_json()?;
        let (z, fam) = parse_substitution(&v)?;
        Ok((v, z, fam))
    }
}

/// `{"matrix": [[...]], "vector": [...]}` with integer and rational entries
/// given as numbers or strings.
#[derive(Args, Debug, Clone)]
pub struct MatrixVectorInput {
    /// JSON file (`-` for stdin).
    input: Option<PathBuf>,
    /// Inline JSON instead of a file.
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
}

#[derive(Deserialize)]
struct MatrixVector {
    matrix: Vec<Vec<BigIntRepr>>,
    vector: Vec<RationalRepr>,
}

impl MatrixVectorInput {
    pub fn load(&self) -> Result<(Value, IntMatrix, RatVector), Failure> {
        let v = read_json(self.input.as_ref(), self.json.as_ref())?;
        let mv: MatrixVector =
            serde_json::from_value(v.clone()).map_err(|e| Failure::Input(format!("expected {{matrix, vector}}: {e}")))?;
        let rows: Vec<Vec<BigInt>> = mv.matrix.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        let a = IntMatrix::from_rows(rows)?;
        let x = RatVector(mv.vector.into_iter().map(|q| q.0).collect());
        if x.dim() != a.dim() {
            return Err(Failure::Input(format!("vector has {} entries, matrix is {}x{}", x.dim(), a.dim(), a.dim())));
        }
        Ok((v, a, x))
    }
}

/// Comma-separated rationals such as `1,1/2,3`.
pub fn parse_vector_csv(s: &str) -> Result<RatVector, Failure> {
    s.split(',')
        .map(|t| parse_rational(t).map_err(Failure::Input))
        .collect::<Result<Vec<_>, _>>()
        .map(RatVector)
}
