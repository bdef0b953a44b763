//! Smith normal form over Z and integer linear solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Mat;

type BMat = Vec<Vec<BigInt>>;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: BMat,
    pub v: BMat,
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

fn big(m: &Mat) -> BMat {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn ident(n: usize) -> BMat {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

fn row_axpy(m: &mut BMat, dst: usize, q: &BigInt, src: usize) {
    // row_dst -= q * row_src
    for j in 0..m[dst].len() {
        let t = &m[src][j] * q;
        m[dst][j] -= t;
    }
}

fn col_axpy(m: &mut BMat, dst: usize, q: &BigInt, src: usize) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn swap_cols(m: &mut BMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith(m: &Mat) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = big(m);
    let mut u = ident(rows);
    let mut v = ident(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        let mut dirty = false;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                dirty |= !a[i][t].is_zero();
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                dirty |= !a[t][j].is_zero();
            }
        }
        if dirty {
            continue;
        }
        // divisibility: fold an offending row into the pivot row and retry
        let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = offender {
            let minus_one = BigInt::from(-1);
            row_axpy(&mut a, t, &minus_one, i);
            row_axpy(&mut u, t, &minus_one, i);
            continue;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    Smith { u, v, diag, rows, cols }
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn diagonal_i64(&self) -> Result<Vec<i64>> {
        self.diag.iter().map(to_i64).collect()
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("smith normal form"))
}

/// Solution set of `M x = b` over Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSolution {
    /// The solution whose coordinates along kernel directions (in the
    /// column basis produced by the reduction) are zero.
    pub particular: Vec<i64>,
    /// A basis of the integer kernel of `M`.
    pub kernel: Vec<Vec<i64>>,
}

/// Solves `M x = b`; `None` when no integer solution exists.
pub fn solve(m: &Mat, b: &[i64]) -> Result<Option<IntSolution>> {
    let rows = m.len();
    if b.len() != rows {
        return Err(Error::LengthMismatch { expected: rows, got: b.len() });
    }
    let cols = m.first().map_or(0, Vec::len);
    let s = smith(m);
    let rank = s.rank();
    let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let ub: Vec<BigInt> = s.u.iter().map(|row| row.iter().zip(&bb).map(|(x, y)| x * y).sum()).collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        if i < rank {
            let (q, r) = ub[i].div_rem(&s.diag[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return Ok(None);
        }
    }
    let particular = (0..cols)
        .map(|i| to_i64(&s.v[i].iter().zip(&y).map(|(x, z)| x * z).sum::<BigInt>()))
        .collect::<Result<Vec<_>>>()?;
    let kernel = (rank..cols).map(|j| (0..cols).map(|i| to_i64(&s.v[i][j])).collect()).collect::<Result<Vec<_>>>()?;
    Ok(Some(IntSolution { particular, kernel }))
}
