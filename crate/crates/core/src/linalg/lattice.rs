//! Lattice saturation via integer kernels and column Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{nullspace, rref, IntVector, RatVector};
use crate::error::{Error, Result};

/// Extended gcd with `s*a + t*b = g`, `g >= 0`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Unimodular column operation on columns `a` and `b` of `cols` that leaves
/// `gcd(cols[a][row], cols[b][row])` in column `a` and zero in column `b`.
fn gcd_columns(cols: &mut [IntVector], a: usize, b: usize, row: usize) {
    let x = cols[a][row].clone();
    let y = cols[b][row].clone();
    if y.is_zero() {
        return;
    }
    let (g, s, t) = ext_gcd(&x, &y);
    let xg = &x / &g;
    let yg = &y / &g;
    let n = cols[a].len();
    for i in 0..n {
        let ca = cols[a][i].clone();
        let cb = cols[b][i].clone();
        cols[a][i] = &s * &ca + &t * &cb;
        cols[b][i] = &xg * &cb - &yg * &ca;
    }
}

/// Column-style Hermite normal form of a full-column-rank integer matrix given
/// by its columns. Two bases span the same lattice iff their HNFs are equal.
pub fn column_hnf(columns: &[IntVector]) -> Vec<IntVector> {
    let mut cols = columns.to_vec();
    let r = cols.len();
    let Some(d) = cols.first().map(Vec::len) else {
        return cols;
    };
    let mut c = 0;
    for row in 0..d {
        if c == r {
            break;
        }
        for j in c + 1..r {
            gcd_columns(&mut cols, c, j, row);
        }
        if cols[c][row].is_zero() {
            continue;
        }
        if cols[c][row].is_negative() {
            for x in cols[c].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = cols[c][row].clone();
        for j in 0..c {
            let q = cols[j][row].div_floor(&pivot);
            if !q.is_zero() {
                let pc = cols[c].clone();
                for (x, p) in cols[j].iter_mut().zip(&pc) {
                    *x -= &q * p;
                }
            }
        }
        c += 1;
    }
    cols.retain(|v| v.iter().any(|x| !x.is_zero()));
    cols
}

/// Basis of `{x in Z^d : K x = 0}` for an integer matrix `K` with `d` columns.
///
/// The kernel of an integer matrix is automatically saturated, so the
/// returned vectors form a basis of the full lattice `ker(K) ∩ Z^d`.
pub fn integer_kernel(k_rows: &[IntVector], d: usize) -> Vec<IntVector> {
    // Column-reduce K by unimodular operations tracked in U (stored by columns).
    let mut kcols: Vec<IntVector> = (0..d).map(|j| k_rows.iter().map(|r| r[j].clone()).collect()).collect();
    let mut ucols: Vec<IntVector> = (0..d)
        .map(|j| (0..d).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut p = 0;
    for row in 0..k_rows.len() {
        if p == d {
            break;
        }
        for j in p + 1..d {
            if kcols[j][row].is_zero() {
                continue;
            }
            // Apply the same unimodular operation to K and U.
            let x = kcols[p][row].clone();
            let y = kcols[j][row].clone();
            let (g, s, t) = ext_gcd(&x, &y);
            let xg = &x / &g;
            let yg = &y / &g;
            for cols in [&mut kcols, &mut ucols] {
                let n = cols[p].len();
                for i in 0..n {
                    let ca = cols[p][i].clone();
                    let cb = cols[j][i].clone();
                    cols[p][i] = &s * &ca + &t * &cb;
                    cols[j][i] = &xg * &cb - &yg * &ca;
                }
            }
        }
        if !kcols[p][row].is_zero() {
            p += 1;
        }
    }
    ucols.split_off(p)
}

/// Integer basis of `Span_Q(generators) ∩ Z^d`, in column Hermite normal form.
pub fn saturate_lattice(generators: &[RatVector]) -> Result<Vec<IntVector>> {
    let Some(first) = generators.first() else {
        return Err(Error::Degenerate("no generators".into()));
    };
    let d = first.dim();
    if d == 0 {
        return Err(Error::Degenerate("zero-dimensional generators".into()));
    }
    if let Some(g) = generators.iter().find(|g| g.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
    }
    let mut rows: Vec<Vec<BigRational>> = generators.iter().map(|g| g.0.clone()).collect();
    let r = rref(&mut rows).len();
    if r == 0 {
        return Err(Error::Degenerate("generators span the zero subspace".into()));
    }
    rows.truncate(r);
    // Integer equations cutting out the span: the annihilator of the generators.
    let annihilator: Vec<IntVector> = nullspace(&rows, d)
        .into_iter()
        .map(|v| RatVector(v).primitive_integer())
        .collect();
    let basis = integer_kernel(&annihilator, d);
    if basis.len() != r {
        return Err(Error::Internal(format!("saturation produced rank {} instead of {r}", basis.len())));
    }
    Ok(column_hnf(&basis).into_iter().map(normalize_sign).collect())
}

fn normalize_sign(v: IntVector) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::primitive_part;

    fn iv(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn saturates_index_two_sublattice() {
        let b = saturate_lattice(&[RatVector::from_ints(&[2, 0])]).unwrap();
        assert_eq!(b, vec![iv(&[1, 0])]);
    }

    #[test]
    fn third_coordinate_saturates() {
        let b = saturate_lattice(&[RatVector::from_ints(&[1, 1, 0]), RatVector::from_ints(&[0, 0, 2])]).unwrap();
        assert!(b.contains(&iv(&[0, 0, 1])));
        assert_eq!(b, vec![iv(&[1, 1, 0]), iv(&[0, 0, 1])]);
    }

    #[test]
    fn rational_generator() {
        let half = BigRational::new(1.into(), 2.into());
        let b = saturate_lattice(&[RatVector(vec![half.clone(), half])]).unwrap();
        assert_eq!(b, vec![iv(&[1, 1])]);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(saturate_lattice(&[]).is_err());
        assert!(saturate_lattice(&[RatVector::from_ints(&[0, 0])]).is_err());
    }

    #[test]
    fn full_rank_gives_identity_lattice() {
        let b = saturate_lattice(&[RatVector::from_ints(&[2, 1]), RatVector::from_ints(&[0, 3])]).unwrap();
        assert_eq!(column_hnf(&b), vec![iv(&[1, 0]), iv(&[0, 1])]);
    }

    #[test]
    fn hnf_identifies_equal_lattices() {
        let a = column_hnf(&[iv(&[1, 2, 3]), iv(&[0, 1, 1])]);
        let b = column_hnf(&[iv(&[1, 3, 4]), iv(&[2, 5, 7])]);
        assert_eq!(a, b);
    }

    #[test]
    fn integer_kernel_of_row() {
        let k = integer_kernel(&[iv(&[2, 3])], 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!((BigInt::from(2) * &v[0] + BigInt::from(3) * &v[1]).is_zero());
        assert_eq!(primitive_part(v).iter().map(|x| x.abs()).collect::<Vec<_>>(), iv(&[3, 2]));
    }
}
