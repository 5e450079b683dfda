//! Matrix realizations and coordinate extraction on spans.

use super::LieAlgebra;
use crate::error::{BrfError, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use std::ops::Range;

/// Coordinates with respect to a fixed list of independent vectors.
///
/// A set of pivot positions is chosen so that the restriction of the vectors
/// to those positions is invertible; coordinates of a vector in the span are
/// read off there and then verified against the full vector.
#[derive(Clone, Debug)]
pub struct SpanCoords<S> {
    pub len: usize,
    pivots: Vec<usize>,
    /// `pinv[p]` = sparse column of the inverse pivot block.
    pinv: Vec<Vec<(usize, S)>>,
    vectors: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SpanCoords<S> {
    pub fn new(vectors: &[Vec<S>], tol: f64) -> Result<Self> {
        let m = vectors.len();
        let len = vectors.first().map_or(0, |v| v.len());
        if m == 0 {
            return Ok(SpanCoords { len, pivots: Vec::new(), pinv: Vec::new(), vectors: Vec::new() });
        }
        let rows = Mat::from_rows(vectors);
        let (_, pivots) = rows.rref(tol);
        if pivots.len() != m {
            return Err(BrfError::DegenerateInput(format!(
                "{} vectors span only {} dimensions",
                m,
                pivots.len()
            )));
        }
        let block = Mat::from_fn(m, m, |p, i| vectors[i][pivots[p]].clone());
        let inv = block
            .inverse(tol)
            .ok_or_else(|| BrfError::Numerical("pivot block is singular".into()))?;
        let pinv = (0..m)
            .map(|p| (0..m).filter_map(|i| Some((i, inv.get(i, p).clone())).filter(|(_, v)| !v.is_zero())).collect())
            .collect();
        let sparse = vectors
            .iter()
            .map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect())
            .collect();
        Ok(SpanCoords { len, pivots, pinv, vectors: sparse })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates without the membership check.
    pub fn coords_unchecked(&self, w: &[S]) -> Vec<S> {
        let mut c = vec![S::zero(); self.dim()];
        for (p, &row) in self.pivots.iter().enumerate() {
            let wp = &w[row];
            if wp.is_zero() {
                continue;
            }
            for (i, v) in &self.pinv[p] {
                c[*i] = c[*i].clone() + v.clone() * wp.clone();
            }
        }
        c
    }

    /// Coordinates of `w`, or `None` when `w` is not in the span.
    pub fn coords_dense(&self, w: &[S], tol: f64) -> Option<Vec<S>> {
        let c = self.coords_unchecked(w);
        let mut r: Vec<S> = w.to_vec();
        for (ci, v) in c.iter().zip(&self.vectors) {
            if ci.is_zero() {
                continue;
            }
            for (k, x) in v {
                r[*k] = r[*k].clone() - ci.clone() * x.clone();
            }
        }
        let scale = w.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
        if r.iter().all(|x| x.is_negligible(tol * scale)) {
            Some(c)
        } else {
            None
        }
    }
}

/// Flattens a matrix into a vector, row-major.
pub fn flatten<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    m.data.clone()
}

/// Lie algebra given by a basis of matrices closed under commutators.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra<S> {
    pub basis: Vec<Mat<S>>,
    pub labels: Vec<String>,
    span: SpanCoords<S>,
}

impl<S: Scalar> MatrixAlgebra<S> {
    pub fn new(basis: Vec<Mat<S>>, labels: Vec<String>, tol: f64) -> Result<Self> {
        let flat: Vec<Vec<S>> = basis.iter().map(flatten).collect();
        let span = SpanCoords::new(&flat, tol)?;
        Ok(MatrixAlgebra { basis, labels, span })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, m: &Mat<S>, tol: f64) -> Option<Vec<S>> {
        self.span.coords_dense(&flatten(m), tol)
    }

    pub fn element(&self, x: &[S]) -> Mat<S> {
        let n = self.basis[0].rows;
        let mut m = Mat::zeros(n, n);
        for (xi, b) in x.iter().zip(&self.basis) {
            if !xi.is_zero() {
                m = m.add(&b.scale(xi));
            }
        }
        m
    }

    pub fn to_lie_algebra(
        &self,
        name: impl Into<String>,
        simple_blocks: Vec<Range<usize>>,
        tol: f64,
    ) -> Result<LieAlgebra<S>> {
        let n = self.dim();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.basis[i], &self.basis[j]);
                let br = a.mul(b).sub(&b.mul(a));
                let c = self.coords(&br, tol).ok_or_else(|| {
                    BrfError::Construction(format!("basis not closed under brackets ({i},{j})"))
                })?;
                table[i * n + j] = c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            }
        }
        Ok(LieAlgebra::from_upper_brackets(name, self.labels.clone(), |i, j| table[i * n + j].clone(), simple_blocks))
    }
}

/// Real `2n×2n` encoding of a complex `n×n` matrix given by its real and
/// imaginary parts: `a + ib ↦ [[a, -b], [b, a]]` entrywise.
pub fn realify<S: Scalar>(re: &Mat<S>, im: &Mat<S>) -> Mat<S> {
    let n = re.rows;
    Mat::from_fn(2 * n, 2 * n, |r, c| {
        let (i, a) = (r / 2, r % 2);
        let (j, b) = (c / 2, c % 2);
        match (a, b) {
            (0, 0) | (1, 1) => re.get(i, j).clone(),
            (0, 1) => -im.get(i, j).clone(),
            _ => im.get(i, j).clone(),
        }
    })
}

/// Complex matrix with exact real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<S> {
    pub re: Mat<S>,
    pub im: Mat<S>,
}

impl<S: Scalar> CMat<S> {
    pub fn zeros(n: usize) -> Self {
        CMat { re: Mat::zeros(n, n), im: Mat::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.re.rows
    }

    pub fn add_entry(&mut self, i: usize, j: usize, re: S, im: S) {
        let r = self.re.get(i, j).clone() + re;
        self.re.set(i, j, r);
        let m = self.im.get(i, j).clone() + im;
        self.im.set(i, j, m);
    }

    pub fn mul(&self, o: &CMat<S>) -> CMat<S> {
        CMat {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, s: &S) -> CMat<S> {
        CMat { re: self.re.scale(s), im: self.im.scale(s) }
    }

    pub fn add(&self, o: &CMat<S>) -> CMat<S> {
        CMat { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn realify(&self) -> Mat<S> {
        realify(&self.re, &self.im)
    }

    /// Kronecker product.
    pub fn kron(&self, o: &CMat<S>) -> CMat<S> {
        let (a, b) = (self.n(), o.n());
        let mut out = CMat::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        let (sr, si) = (self.re.get(i, j).clone(), self.im.get(i, j).clone());
                        let (or, oi) = (o.re.get(k, l).clone(), o.im.get(k, l).clone());
                        out.add_entry(
                            i * b + k,
                            j * b + l,
                            sr.clone() * or.clone() - si.clone() * oi.clone(),
                            sr * oi + si * or,
                        );
                    }
                }
            }
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn span_coords_recovers_combination() {
        let v: Vec<Vec<Q>> = vec![vec![q(1, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(1, 1)]];
        let s = SpanCoords::new(&v, 0.0).unwrap();
        let w = vec![q(2, 1), q(5, 1), q(3, 1)];
        assert_eq!(s.coords_dense(&w, 0.0).unwrap(), vec![q(2, 1), q(3, 1)]);
        assert!(s.coords_dense(&[q(1, 1), q(0, 1), q(0, 1)], 0.0).is_none());
    }

    #[test]
    fn dependent_vectors_rejected() {
        let v = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(SpanCoords::new(&v, 1e-12), Err(BrfError::DegenerateInput(_))));
    }

    #[test]
    fn realify_is_multiplicative() {
        let mut a = CMat::<Q>::zeros(2);
        a.add_entry(0, 1, q(1, 1), q(2, 1));
        a.add_entry(1, 0, q(-3, 1), q(1, 2));
        let mut b = CMat::<Q>::zeros(2);
        b.add_entry(0, 0, q(0, 1), q(1, 1));
        b.add_entry(1, 1, q(4, 1), q(-1, 1));
        assert_eq!(a.mul(&b).realify(), a.realify().mul(&b.realify()));
    }
}
