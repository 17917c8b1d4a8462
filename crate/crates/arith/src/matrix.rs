//! Exact linear algebra over the rational-function field.
//!
//! Two strategies are provided. Fraction-free (Bareiss) elimination first
//! scales rows by the lcm of their denominators and then works on
//! polynomials with exact divisions. Field elimination keeps every entry a
//! reduced fraction, which is much cheaper when the entries carry large,
//! mostly cancelling denominators.

use num_bigint::BigInt;

use crate::gcd::lcm;
use crate::mpoly::MPoly;
use crate::scalar::Scalar;

/// Dense matrix of scalars, row-major.
pub type Matrix = Vec<Vec<Scalar>>;

/// Clears denominators row by row. Returns the polynomial rows and the
/// multiplier used on each row.
fn clear_rows(m: &[Vec<Scalar>]) -> (Vec<Vec<MPoly>>, Vec<MPoly>) {
    let mut rows = Vec::with_capacity(m.len());
    let mut mults = Vec::with_capacity(m.len());
    for row in m {
        let mut l = MPoly::one();
        for e in row {
            if !e.is_zero() && !e.denominator().is_one() {
                l = lcm(&l, e.denominator());
            }
        }
        let prow = row
            .iter()
            .map(|e| {
                if e.is_zero() {
                    MPoly::zero()
                } else if e.denominator() == &l {
                    e.numerator().clone()
                } else {
                    let f = l.div_exact(e.denominator()).expect("lcm is a multiple");
                    e.numerator().mul(&f)
                }
            })
            .collect();
        rows.push(prow);
        mults.push(l);
    }
    (rows, mults)
}

fn pivot_cost(p: &MPoly) -> (u32, usize) {
    (p.total_degree(), p.len())
}

/// Exact determinant by fraction-free elimination. The empty matrix has
/// determinant 1.
pub fn det_fraction_free(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Scalar::one();
    }
    let (mut a, mults) = clear_rows(m);
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| pivot_cost(&a[r][k]));
        let Some(piv) = piv else {
            return Scalar::zero();
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = if prev.is_one() {
                    v
                } else {
                    v.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][k] = MPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if negate {
        det = det.neg();
    }
    let den = mults.iter().fold(MPoly::one(), |acc, l| acc.mul(l));
    Scalar::new(det, den).expect("row multipliers are nonzero")
}

/// Exact determinant by Gaussian elimination over the field, reducing every
/// intermediate fraction. When the entries carry large, mostly cancelling
/// denominators this is far cheaper than clearing them up front.
pub fn det_field(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].complexity());
        let Some(piv) = piv else {
            return Scalar::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = det.neg();
        }
        let p = a[k][k].clone();
        det = det.mul(&p);
        let inv = p.inv().expect("pivot is nonzero");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].mul(&inv);
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    a[i][j] = a[i][j].sub(&f.mul(&a[k][j]));
                }
            }
            a[i][k] = Scalar::zero();
        }
    }
    det
}

/// Reference determinant by cofactor expansion along the first row.
/// Exponential cost; intended as a test oracle for small matrices.
pub fn det_cofactor(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    let mut acc = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Matrix = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let t = m[0][j].mul(&det_cofactor(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Fraction-free row echelon form. Returns the polynomial rows and the
/// pivot column of each nonzero row.
fn echelon(m: &[Vec<Scalar>]) -> (Vec<Vec<MPoly>>, Vec<usize>) {
    let (mut a, _) = clear_rows(m);
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut prev = MPoly::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| pivot_cost(&a[r][c]));
        let Some(piv) = piv else {
            continue;
        };
        a.swap(piv, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = a[i][j].mul(&a[rank][c]).sub(&a[i][c].mul(&a[rank][j]));
                a[i][j] = if prev.is_one() {
                    v
                } else {
                    v.div_exact(&prev).expect("fraction-free division is exact")
                };
            }
            a[i][c] = MPoly::zero();
        }
        prev = a[rank][c].clone();
        pivots.push(c);
        rank += 1;
    }
    a.truncate(rank);
    (a, pivots)
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    echelon(m).1.len()
}

/// Reduced row echelon form over the field, every intermediate fraction
/// kept in lowest terms. Pivots are the least complex candidates in their
/// column. Returns the nonzero rows and their pivot columns.
fn rref_field(m: &[Vec<Scalar>], cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| a[r][c].complexity());
        let Some(piv) = piv else {
            continue;
        };
        a.swap(piv, rank);
        let inv = a[rank][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            if !a[rank][j].is_zero() {
                a[rank][j] = a[rank][j].mul(&inv);
            }
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    a.truncate(rank);
    (a, pivots)
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per non-pivot
/// column, each with a 1 in its own free position.
pub fn kernel(m: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let (a, pivots) = rref_field(m, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = row[f].neg();
            }
            v
        })
        .collect()
}

/// `M v`.
pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Scalar::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

/// Integer matrix helper for tests and examples.
pub fn from_ints(rows: &[&[i64]]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| Scalar::from_bigint(BigInt::from(v))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &str) -> Scalar {
        e.parse().unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_fraction_free(&[]), Scalar::one());
        assert_eq!(det_fraction_free(&[vec![s("x/y")]]), s("x/y"));
        let m = vec![vec![s("x"), s("y")], vec![s("y"), s("x")]];
        assert_eq!(det_fraction_free(&m), s("x^2 - y^2"));
        let m = from_ints(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(det_fraction_free(&m), det_cofactor(&m));
        assert_eq!(det_fraction_free(&m), Scalar::from_int(-2));
    }

    #[test]
    fn singular_matrix() {
        let m = vec![vec![s("1/x"), s("1/y")], vec![s("y"), s("x")]];
        assert!(det_fraction_free(&m).is_zero());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = vec![
            vec![s("x"), s("y"), s("x + y")],
            vec![s("1/x"), s("1/y"), s("2/(x*y)")],
        ];
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(|e| e.is_zero()));
        assert_eq!(k[0][2], Scalar::one());
    }
}
