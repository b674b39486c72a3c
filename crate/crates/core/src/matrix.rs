//! Small dense integer matrices with exact, overflow-checked arithmetic.
//!
//! Elimination runs fraction-free (Bareiss) over `i128` so that every
//! intermediate value is a minor of the input and division is always exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a `height × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[i64]>>(height: usize, columns: &[C]) -> Result<Self> {
        let mut m = Self::zeros(height, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != height {
                return Err(Error::DimensionMismatch { expected: height, found: c.len() });
            }
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(0i64, |acc, (&a, &b)| {
                    a.checked_mul(b).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let col = self.mul_vec(&other.column(j))?;
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> Result<usize> {
        let rows: Vec<Vec<i128>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        Ok(bareiss(rows, self.cols)?.rank)
    }

    pub fn det(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let det = det_i128(&self.to_rows())?;
        i64::try_from(det).map_err(|_| Error::Overflow)
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.is_square() && self.det()?.abs() == 1)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

pub(crate) struct Echelon {
    pub rank: usize,
    /// Signed determinant when the input was square, zero if singular.
    pub det: i128,
}

/// Fraction-free Gaussian elimination. Columns without a pivot are skipped,
/// which keeps every stored entry equal to a minor of the input.
pub(crate) fn bareiss(mut m: Vec<Vec<i128>>, cols: usize) -> Result<Echelon> {
    let nrows = m.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    let mut sign: i128 = 1;
    let mut skipped = false;
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            skipped = true;
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        let pivot = m[rank][col];
        for i in rank + 1..nrows {
            let lead = m[i][col];
            for j in col + 1..cols {
                let a = m[i][j].checked_mul(pivot).ok_or(Error::Overflow)?;
                let b = lead.checked_mul(m[rank][j]).ok_or(Error::Overflow)?;
                let num = a.checked_sub(b).ok_or(Error::Overflow)?;
                debug_assert_eq!(num % prev, 0, "Bareiss division must be exact");
                m[i][j] = num / prev;
            }
            m[i][col] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    let det = if nrows == cols && rank == nrows && !skipped {
        sign * m[nrows - 1][cols - 1]
    } else {
        0
    };
    Ok(Echelon { rank, det })
}

pub(crate) fn det_i128<R: AsRef<[i64]>>(rows: &[R]) -> Result<i128> {
    let n = rows.len();
    if n == 0 {
        return Ok(1);
    }
    let m = rows.iter().map(|r| r.as_ref().iter().map(|&x| x as i128).collect()).collect();
    Ok(bareiss(m, n)?.det)
}

/// Integer vector orthogonal to the `d - 1` given vectors in `Z^d`
/// (the generalized cross product). Zero exactly when they are dependent.
pub fn cofactor_normal<V: AsRef<[i64]>>(vectors: &[V], dim: usize) -> Result<Vec<i64>> {
    if vectors.len() + 1 != dim {
        return Err(Error::InvalidParameter(format!(
            "need {} vectors for a normal in dimension {dim}, got {}",
            dim.saturating_sub(1),
            vectors.len()
        )));
    }
    for v in vectors {
        if v.as_ref().len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.as_ref().len() });
        }
    }
    (0..dim)
        .map(|j| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| v.as_ref().iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let d = det_i128(&minor)?;
            let signed = if j % 2 == 0 { d } else { -d };
            i64::try_from(signed).map_err(|_| Error::Overflow)
        })
        .collect()
}
