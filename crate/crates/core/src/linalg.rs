//! Dense matrices over any [`Scalar`], with Gauss-Jordan elimination.
//!
//! Float-only spectral work is delegated to nalgebra through the helpers at
//! the bottom of the file.

use crate::scalar::Scalar;
use nalgebra::DMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out: Mat<S> = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self.get(i, i).clone();
        }
        t
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (i + 1..self.cols).all(|j| (self.get(i, j).clone() - self.get(j, i).clone()).is_negligible(tol))
            })
    }

    /// Returns `Some(s)` when the matrix equals `s·I`.
    pub fn scalar_multiple_of_identity(&self, tol: f64) -> Option<S> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let s = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { s.clone() } else { S::zero() };
                if !(self.get(i, j).clone() - expect).is_negligible(tol) {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// Reduced row echelon form and pivot columns. `tol` is relative to the
    /// largest entry and only used in float mode.
    pub fn rref(&self, tol: f64) -> (Mat<S>, Vec<usize>) {
        let mut m = self.clone();
        let scale = m.max_abs().max(1e-300);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let mut best: Option<usize> = None;
            if S::EXACT {
                best = (r..m.rows).find(|&i| !m.get(i, c).is_zero());
            } else {
                let mut bv = tol * scale;
                for i in r..m.rows {
                    let v = m.get(i, c).to_f64().abs();
                    if v > bv {
                        bv = v;
                        best = Some(i);
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            m.set(r, c, S::one());
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let pv = m.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).clone() - f.clone() * pv.clone();
                    m.set(i, j, v);
                }
                m.set(i, c, S::zero());
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of `{v : self·v = 0}`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        let (r, piv) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in piv.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self·X = b` for a consistent system; returns one solution.
    pub fn solve(&self, b: &Mat<S>, tol: f64) -> Option<Mat<S>> {
        assert_eq!(self.rows, b.rows);
        let aug = Mat::from_fn(self.rows, self.cols + b.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b.get(i, j - self.cols).clone()
            }
        });
        let (r, piv) = aug.rref(tol);
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (row, &pc) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self, tol: f64) -> Option<Mat<S>> {
        if self.rows != self.cols {
            return None;
        }
        if self.rank(tol) != self.rows {
            return None;
        }
        self.solve(&Mat::identity(self.rows), tol)
    }

    /// Positive definiteness by symmetric elimination: every pivot positive.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        if self.rows != self.cols || !self.is_symmetric(tol) {
            return false;
        }
        let n = self.rows;
        let mut m = self.clone();
        let scale = self.max_abs().max(1e-300);
        for k in 0..n {
            let p = m.get(k, k).clone();
            if S::EXACT {
                if !p.is_positive() {
                    return false;
                }
            } else if p.to_f64() <= tol * scale {
                return false;
            }
            for i in k + 1..n {
                let f = m.get(i, k).clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(k, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        true
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

/// `u^T M v`.
pub fn bilinear<S: Scalar>(m: &Mat<S>, u: &[S], v: &[S]) -> S {
    dot(u, &m.mul_vec(v))
}

pub fn axpy<S: Scalar>(a: &S, x: &[S], y: &mut [S]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.clone() + a.clone() * xi.clone();
        }
    }
}

pub fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Ascending eigenvalues of the symmetric part of `m`.
pub fn sym_eigenvalues(m: &Mat<f64>) -> Vec<f64> {
    let d = to_dmatrix(m);
    let s = (&d + d.transpose()) * 0.5;
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Nullspace via SVD, robust for float inputs with irrational entries.
pub fn nullspace_svd(m: &Mat<f64>, tol: f64) -> Vec<Vec<f64>> {
    let n = m.cols;
    if m.rows == 0 {
        return (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    }
    // Work with the Gram matrix so the SVD is always square.
    let d = to_dmatrix(m);
    let g = d.transpose() * &d;
    let eig = g.symmetric_eigen();
    let scale = eig.eigenvalues.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let mut out = Vec::new();
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev.abs() <= tol * scale {
            out.push(eig.eigenvectors.column(k).iter().copied().collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn exact_inverse_roundtrip() {
        let m: Mat<Q> = Mat::from_rows(&[
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1), q(4, 1)],
        ]);
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m: Mat<Q> = Mat::from_rows(&[vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]);
        let ns = m.nullspace(0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let a: Mat<f64> = Mat::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]);
        let b = Mat::from_rows(&[vec![1.0], vec![3.0]]);
        assert!(a.solve(&b, 1e-12).is_none());
    }

    #[test]
    fn positive_definite_detection() {
        let a: Mat<f64> = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let b: Mat<f64> = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(a.is_positive_definite(1e-12));
        assert!(!b.is_positive_definite(1e-12));
    }

    #[test]
    fn svd_nullspace_matches_exact() {
        let m: Mat<f64> = Mat::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0]]);
        let ns = nullspace_svd(&m, 1e-12);
        assert_eq!(ns.len(), 1);
        let r = m.mul_vec(&ns[0]);
        assert!(r.iter().all(|x| x.abs() < 1e-12));
    }
}
