//! Dense row-major matrices with a one-sided Jacobi SVD.
//!
//! Matrices in this crate are small (Jacobians of a handful of equations, jet
//! coefficient matrices of a few hundred columns), so a Hestenes-Jacobi SVD is
//! accurate and fast enough, and it stays generic over the scalar type.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::real::Real;

/// Default relative threshold for [`Matrix::numerical_rank`].
pub const DEFAULT_RANK_EPS: f64 = 1e-8;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Singular value decomposition `A = U diag(sigma) V^T`.
///
/// For a matrix with fewer rows than columns the decomposition is computed on
/// a zero-padded square matrix, so `v` is always a full `cols x cols`
/// orthogonal matrix and `sigma` has `cols` entries (trailing ones may be zero).
/// `u` has `max(rows, cols)` rows; rows beyond `rows` belong to the padding.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub sigma: Vec<T>,
    pub v: Matrix<T>,
    rows: usize,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows of equal length.
    ///
    /// # Panics
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|l| self[(i, l)] * other[(l, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| *a * *b).sum())
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)])
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn symmetrize(&self) -> Self {
        assert_eq!(self.rows, self.cols, "symmetrize needs a square matrix");
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * half)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Singular values in descending order; `min(rows, cols)` entries.
    pub fn singular_values(&self) -> Vec<T> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sigma = if self.rows >= self.cols {
            jacobi_columns(self, false).1
        } else {
            jacobi_columns(&self.transpose(), false).1
        };
        sigma.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sigma
    }

    /// Number of singular values strictly above `eps * sigma_max`.
    pub fn numerical_rank(&self, eps: T) -> usize {
        let sigma = self.singular_values();
        match sigma.first() {
            Some(&smax) if smax > T::zero() => sigma.iter().filter(|s| **s > eps * smax).count(),
            _ => 0,
        }
    }

    pub fn svd(&self) -> Svd<T> {
        let work = if self.rows >= self.cols {
            self.clone()
        } else {
            let mut padded = Self::zeros(self.cols, self.cols);
            padded.data[..self.data.len()].copy_from_slice(&self.data);
            padded
        };
        let (u_cols, sigma, v_cols) = jacobi_columns(&work, true);
        let v_cols = v_cols.expect("right vectors requested");
        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by(|&a, &b| {
            sigma[b]
                .partial_cmp(&sigma[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let n = self.cols;
        let m = work.rows;
        let u = Self::from_fn(m, n, |i, j| u_cols[order[j]][i]);
        let v = Self::from_fn(n, n, |i, j| v_cols[order[j]][i]);
        let sigma = order.iter().map(|&j| sigma[j]).collect();
        Svd {
            u,
            sigma,
            v,
            rows: self.rows,
        }
    }

    /// Orthonormal basis (as columns) of the null space, using a relative cutoff.
    pub fn null_space(&self, eps: T) -> Self {
        let svd = self.svd();
        let smax = svd.sigma.first().copied().unwrap_or(T::zero());
        let idx: Vec<usize> = (0..svd.sigma.len())
            .filter(|&j| j >= self.rows || svd.sigma[j] <= eps * smax)
            .collect();
        svd.v.select_columns(&idx)
    }

    /// LU factorisation with partial pivoting; `None` for an exactly singular pivot.
    fn lu(&self) -> Option<(Self, Vec<usize>, bool)> {
        assert_eq!(self.rows, self.cols, "LU needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| {
                a[(i, k)]
                    .abs()
                    .partial_cmp(&a[(j, k)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[(p, k)] == T::zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(k, p);
                odd = !odd;
            }
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                a[(i, k)] = f;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - f * akj;
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn determinant(&self) -> T {
        if self.rows == 0 {
            return T::one();
        }
        match self.lu() {
            None => T::zero(),
            Some((lu, _, odd)) => {
                let d = (0..self.rows).fold(T::one(), |acc, i| acc * lu[(i, i)]);
                if odd {
                    -d
                } else {
                    d
                }
            }
        }
    }

    /// Solves a square system; `None` when the matrix is exactly singular.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        let mut y: Vec<T> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - lu[(i, j)] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - lu[(i, j)] * y[j];
            }
            y[i] = y[i] / lu[(i, i)];
        }
        Some(y)
    }
}

impl<T: Real> Svd<T> {
    /// Minimum-norm least-squares solution of `A x = b`, discarding singular
    /// values below `cutoff * sigma_max`.
    pub fn solve_least_norm(&self, b: &[T], cutoff: T) -> Vec<T> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let smax = self.sigma.first().copied().unwrap_or(T::zero());
        let n = self.v.rows();
        let mut x = vec![T::zero(); n];
        for (j, &s) in self.sigma.iter().enumerate() {
            if s <= cutoff * smax || s == T::zero() {
                continue;
            }
            let coeff = (0..self.rows).map(|i| self.u[(i, j)] * b[i]).sum::<T>() / s;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = *xi + coeff * self.v[(i, j)];
            }
        }
        x
    }
}

/// Hestenes one-sided Jacobi on the columns of `a` (requires rows >= cols).
/// Returns normalised left vectors, singular values and optionally right vectors,
/// all unsorted and stored column-wise.
#[allow(clippy::type_complexity)]
fn jacobi_columns<T: Real>(a: &Matrix<T>, want_v: bool) -> (Vec<Vec<T>>, Vec<T>, Option<Vec<Vec<T>>>) {
    let n = a.cols;
    let mut u: Vec<Vec<T>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Option<Vec<Vec<T>>> = want_v.then(|| {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
            .collect()
    });
    let eps = T::epsilon();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta, gamma) = u[p].iter().zip(&u[q]).fold(
                    (T::zero(), T::zero(), T::zero()),
                    |(al, be, ga), (x, y)| (al + *x * *x, be + *y * *y, ga + *x * *y),
                );
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<T> = u.iter().map(|c| crate::real::norm2(c)).collect();
    for (col, &s) in u.iter_mut().zip(&sigma) {
        if s > T::zero() {
            col.iter_mut().for_each(|x| *x = *x / s);
        }
    }
    (u, sigma, v)
}

fn rotate<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = m(&[&[3.0, 0.0], &[0.0, -4.0], &[0.0, 0.0]]);
        let s = a.singular_values();
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rank_of_wide_matrix() {
        let a = m(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(a.numerical_rank(1e-8), 2);
        let b = m(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(b.numerical_rank(1e-8), 1);
        assert_eq!(Matrix::<f64>::zeros(2, 3).numerical_rank(1e-8), 0);
    }

    #[test]
    fn svd_reconstructs_and_null_space_is_orthogonal() {
        let a = m(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.5]]);
        let svd = a.svd();
        let n = a.null_space(1e-10);
        assert_eq!(n.cols(), 1);
        let r = a.mul_vec(&n.col(0));
        assert!(r.iter().all(|x| x.abs() < 1e-12));
        for i in 0..2 {
            for j in 0..3 {
                let rec: f64 = (0..3).map(|l| svd.u[(i, l)] * svd.sigma[l] * svd.v[(j, l)]).sum();
                assert!((rec - a[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn least_norm_solution_of_underdetermined_system() {
        let a = m(&[&[1.0, 1.0]]);
        let x = a.svd().solve_least_norm(&[2.0], 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[&[0.0, 2.0], &[3.0, 1.0]]);
        assert!((a.determinant() + 6.0).abs() < 1e-14);
        let x = a.solve(&[4.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!(m(&[&[1.0, 2.0], &[2.0, 4.0]]).solve(&[1.0, 1.0]).is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let a = Matrix::<f32>::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(a.numerical_rank(1e-5), 2);
        assert!((a.determinant() + 2.0).abs() < 1e-5);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<f64>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3.0f64..3.0, r * c)
                .prop_map(move |d| Matrix::from_fn(r, c, |i, j| d[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_is_monotone_in_eps(a in small_matrix(), e1 in 1e-12f64..1e-2, e2 in 1e-12f64..1e-2) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(a.numerical_rank(hi) <= a.numerical_rank(lo));
        }

        #[test]
        fn rank_is_permutation_invariant(a in small_matrix(), seed in 0u64..1000) {
            let rows: Vec<usize> = {
                let mut v: Vec<usize> = (0..a.rows()).collect();
                v.rotate_left((seed as usize) % a.rows());
                v
            };
            let cols: Vec<usize> = (0..a.cols()).rev().collect();
            let p = a.select_rows(&rows).select_columns(&cols);
            prop_assert_eq!(a.numerical_rank(1e-8), p.numerical_rank(1e-8));
        }
    }
}
