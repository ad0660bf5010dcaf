//! Exact rational matrices with fraction-free (Bareiss) elimination for
//! rank, determinant, and nullspace computation. Coefficient growth stays
//! polynomial in the input size instead of exploding the way naive rational
//! elimination can.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::BigRational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>, // row-major
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "matrix {}x{} needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let conv: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(&conv)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Integer copy with each row scaled by the lcm of its denominators
    /// (preserves rank, nullspace, and determinant sign pattern per row).
    fn integerized(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut l = BigInt::one();
                for v in self.row(i) {
                    l = l.lcm(v.denom());
                }
                self.row(i)
                    .iter()
                    .map(|v| v.numer() * (&l / v.denom()))
                    .collect()
            })
            .collect()
    }

    /// Rank via fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.integerized();
        bareiss_ref(&mut m).len()
    }

    /// Determinant (square matrices only).
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::dim("determinant of non-square matrix"));
        }
        if self.rows == 0 {
            return Ok(BigRational::one());
        }
        // scale rows to integers, remember the scale factors
        let mut scale = BigRational::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = BigInt::one();
            for v in self.row(i) {
                l = l.lcm(v.denom());
            }
            scale *= BigRational::from_integer(l.clone());
            m.push(self.row(i).iter().map(|v| v.numer() * (&l / v.denom())).collect());
        }
        let n = self.rows;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            // pivot search: first nonzero in column k at or below row k
            let piv = (k..n).find(|&r| !m[r][k].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => return Ok(BigRational::zero()),
            };
            if piv != k {
                m.swap(piv, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &t / &prev; // exact by Bareiss
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(BigRational::from_integer(sign * m[n - 1][n - 1].clone()) / scale)
    }

    /// Basis of the right nullspace `{x : M x = 0}` in the canonical
    /// reduced form: one vector per free column, with that free variable 1
    /// and all other free variables 0. Deterministic.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.integerized();
        let pivots = bareiss_ref(&mut m);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> =
            (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut x = vec![BigRational::zero(); self.cols];
            x[f] = BigRational::one();
            // back-substitute pivot rows bottom-up
            for &(pr, pc) in pivots.iter().rev() {
                let mut s = BigRational::zero();
                for j in pc + 1..self.cols {
                    if !m[pr][j].is_zero() && !x[j].is_zero() {
                        s += BigRational::from_integer(m[pr][j].clone()) * &x[j];
                    }
                }
                x[pc] = -s / BigRational::from_integer(m[pr][pc].clone());
            }
            basis.push(x);
        }
        basis
    }

    /// Basis of the left nullspace `{v : v M = 0}` as row vectors.
    pub fn left_nullspace(&self) -> Vec<Vec<BigRational>> {
        self.transpose().nullspace()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return Err(Error::dim(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, xv) in x.iter().enumerate() {
                    if !self.at(i, j).is_zero() && !xv.is_zero() {
                        acc += self.at(i, j) * xv;
                    }
                }
                acc
            })
            .collect())
    }

    /// Is `v` in the row span of this matrix? (exact)
    pub fn row_span_contains(&self, v: &[BigRational]) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let r0 = self.rank();
        let mut rows: Vec<Vec<BigRational>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rows.push(v.to_vec());
        let ext = RatMatrix::from_rows(&rows).unwrap();
        ext.rank() == r0
    }
}

/// Fraction-free row echelon form in place; returns the pivot (row, col)
/// list in elimination order. Pivot choice: for each column left to right,
/// the first row (top-down) with a nonzero entry — deterministic.
fn bareiss_ref(m: &mut [Vec<BigInt>]) -> Vec<(usize, usize)> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(piv, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = &t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// Normalize an integer row vector: divide by the gcd of the entries and
/// flip signs so the first nonzero entry is positive. Zero rows unchanged.
pub fn normalize_int_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        g = g.gcd(&v.abs());
    }
    if g.is_zero() {
        return;
    }
    let mut sign = BigInt::one();
    for v in row.iter() {
        if !v.is_zero() {
            if v.is_negative() {
                sign = -sign;
            }
            break;
        }
    }
    let d = g * sign;
    for v in row.iter_mut() {
        *v = &*v / &d;
    }
}

/// Clear denominators of a rational row (multiply by the lcm), then
/// normalize by gcd and leading sign.
pub fn integerize_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in row {
        l = l.lcm(v.denom());
    }
    let mut out: Vec<BigInt> = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    normalize_int_row(&mut out);
    out
}
