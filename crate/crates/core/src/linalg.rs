//! Small dense matrices over Q(sqrt 2).
//!
//! Everything here is exact: Gaussian elimination over a field needs no
//! pivot tolerance, a determinant is zero or it is not. Sizes stay tiny
//! (frame dimensions up to ~12), so dense storage is the simple choice.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Matrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_diag(diag: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += &add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Scalar {
        self.data
            .iter()
            .map(Scalar::abs)
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !work[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if pivot != col {
                for j in 0..n {
                    let tmp = work[(pivot, j)].clone();
                    work[(pivot, j)] = work[(col, j)].clone();
                    work[(col, j)] = tmp;
                }
                det = -det;
            }
            let p = work[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if work[(r, col)].is_zero() {
                    continue;
                }
                let factor = &work[(r, col)] / &p;
                for j in col..n {
                    let sub = &factor * &work[(col, j)];
                    work[(r, j)] -= &sub;
                }
            }
        }
        det
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        (1..=self.rows)
            .map(|k| {
                let mut sub = Matrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub[(i, j)] = self[(i, j)].clone();
                    }
                }
                sub.det()
            })
            .collect()
    }

    /// Exact inverse via Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !work[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let (a, b) = (work[(pivot, j)].clone(), inv[(pivot, j)].clone());
                    work[(pivot, j)] = work[(col, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    work[(col, j)] = a;
                    inv[(col, j)] = b;
                }
            }
            let p = work[(col, col)].clone();
            for j in 0..n {
                work[(col, j)] = &work[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || work[(r, col)].is_zero() {
                    continue;
                }
                let factor = work[(r, col)].clone();
                for j in 0..n {
                    let (w, v) = (&factor * &work[(col, j)], &factor * &inv[(col, j)]);
                    work[(r, j)] -= &w;
                    inv[(r, j)] -= &v;
                }
            }
        }
        Some(inv)
    }

    /// Solve `A x = b` exactly for square invertible `A`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        Some(self.inverse()?.mul_vec(b))
    }

    /// Metric-weighted trace `sum_ij (A^-1)_ij B_ij` of a symmetric bilinear
    /// form `B` against this matrix's inverse (caller supplies the inverse).
    pub fn weighted_trace(inv: &Matrix, b: &Matrix) -> Scalar {
        assert_eq!((inv.rows, inv.cols), (b.rows, b.cols));
        let mut acc = Scalar::zero();
        for i in 0..inv.rows {
            for j in 0..inv.cols {
                if inv[(i, j)].is_zero() || b[(i, j)].is_zero() {
                    continue;
                }
                acc += &(&inv[(i, j)] * &b[(i, j)]);
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense rank-3 array of scalars indexed `(i, j, k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = ([usize; 3], &Scalar)> {
        let d = self.dim;
        self.data.iter().enumerate().filter_map(move |(idx, v)| {
            if v.is_zero() {
                None
            } else {
                Some(([idx / (d * d), (idx / d) % d, idx % d], v))
            }
        })
    }
}

/// Dense rank-4 array of scalars indexed `(i, j, k, l)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<Scalar>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 {
            dim,
            data: vec![Scalar::zero(); dim * dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Scalar) {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = ([usize; 4], &Scalar)> {
        let d = self.dim;
        self.data.iter().enumerate().filter_map(move |(idx, v)| {
            if v.is_zero() {
                None
            } else {
                Some((
                    [idx / (d * d * d), (idx / (d * d)) % d, (idx / d) % d, idx % d],
                    v,
                ))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        Scalar::parse(text).unwrap()
    }

    #[test]
    fn inverse_over_the_field() {
        // includes a sqrt2 entry so the field arithmetic is exercised
        let m = Matrix::from_rows(vec![
            vec![s("1"), s("sqrt2")],
            vec![s("sqrt2"), s("3")],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.det(), s("1"));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Matrix::from_rows(vec![
            vec![s("1"), s("2")],
            vec![s("2"), s("4")],
        ]);
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), s("0"));
    }

    #[test]
    fn leading_minors() {
        let m = Matrix::from_rows(vec![
            vec![s("2"), s("1"), s("0")],
            vec![s("1"), s("2"), s("0")],
            vec![s("0"), s("0"), s("1/2")],
        ]);
        let minors = m.leading_principal_minors();
        assert_eq!(minors, vec![s("2"), s("3"), s("3/2")]);
    }

    #[test]
    fn solve_small_system() {
        let m = Matrix::from_rows(vec![
            vec![s("2"), s("0")],
            vec![s("0"), s("1/2")],
        ]);
        let x = m.solve(&[s("1"), s("1")]).unwrap();
        assert_eq!(x, vec![s("1/2"), s("2")]);
    }
}
