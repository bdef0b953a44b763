//! Overflow-checked integer vectors and matrices.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Every arithmetic step is checked;
//! an overflow surfaces as [`Error::Overflow`] instead of wrapping.

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i64>>;

#[inline]
pub fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

#[inline]
pub fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

#[inline]
pub fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow("negation"))
}

pub fn dot(u: &[i64], v: &[i64]) -> Result<i64> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).try_fold(0i64, |acc, (&x, &y)| add(acc, mul(x, y)?))
}

pub fn vec_add(u: &[i64], v: &[i64]) -> Result<Vec<i64>> {
    u.iter().zip(v).map(|(&x, &y)| add(x, y)).collect()
}

pub fn vec_sub(u: &[i64], v: &[i64]) -> Result<Vec<i64>> {
    u.iter().zip(v).map(|(&x, &y)| add(x, neg(y)?)).collect()
}

pub fn vec_scale(c: i64, v: &[i64]) -> Result<Vec<i64>> {
    v.iter().map(|&x| mul(c, x)).collect()
}

/// `u + c*v`
pub fn axpy(u: &[i64], c: i64, v: &[i64]) -> Result<Vec<i64>> {
    u.iter().zip(v).map(|(&x, &y)| add(x, mul(c, y)?)).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![0; cols]; rows]
}

pub fn mat_vec(m: &Mat, v: &[i64]) -> Result<Vec<i64>> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).try_fold(0i64, |acc, k| add(acc, mul(row[k], b[k][j])?)))
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Result<Mat> {
    a.iter().zip(b).map(|(r, s)| vec_add(r, s)).collect()
}

pub fn transpose(m: &Mat) -> Mat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// Column `j` of `m` as a vector.
pub fn column(m: &Mat, j: usize) -> Vec<i64> {
    m.iter().map(|row| row[j]).collect()
}

/// Builds a matrix from its columns.
pub fn from_columns(cols: &[Vec<i64>], rows: usize) -> Mat {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

pub fn basis_vector(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Determinant by fraction-free Bareiss elimination on `i128`.
pub fn det(m: &Mat) -> Result<i64> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(Error::Overflow("determinant"))?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
}
