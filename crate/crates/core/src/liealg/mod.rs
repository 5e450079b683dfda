//! Compact Lie algebras as structure-constant tensors.

mod classical;
mod matrix;

pub use classical::{
    build_classical, build_g2, build_so, build_sp, build_su, dense_three_form, g2_form, g2_in_so7,
    gl_three_form_stabilizer, invariant_symmetric_forms, invariant_three_forms, orthogonal_algebra, so3_irrep,
    so_matrices, sp_complex_basis, sp_matrices, su_complex_basis, su_matrices, three_form_action, triples,
    ClassicalFamily, G2_FORM,
};
pub use matrix::{realify, CMat, MatrixAlgebra, SpanCoords};

use crate::error::{BrfError, Result};
use crate::linalg::{bilinear, Mat};
use crate::scalar::Scalar;
use serde_json::{json, Value};
use std::ops::Range;

/// `c[i][j][k]` stored sparsely: for each ordered pair `(i, j)` the nonzero
/// coefficients of `[e_i, e_j]`.
#[derive(Clone, Debug)]
pub struct LieAlgebra<S> {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    brackets: Vec<Vec<(usize, S)>>,
    pub killing: Mat<S>,
    /// Index ranges of simple ideals when known from the construction.
    pub simple_blocks: Vec<Range<usize>>,
}

/// Float structure algebra, the default working type.
pub type StructureAlgebra = LieAlgebra<f64>;

/// Linear map between algebras, stored as the images of the source basis.
#[derive(Clone, Debug)]
pub struct AlgebraMap<S> {
    /// `images[i]` = coordinates in the target of the i-th source basis vector.
    pub images: Vec<Vec<S>>,
    pub target_dim: usize,
}

impl<S: Scalar> AlgebraMap<S> {
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.target_dim];
        for (xi, img) in x.iter().zip(&self.images) {
            if xi.is_zero() {
                continue;
            }
            crate::linalg::axpy(xi, img, &mut out);
        }
        out
    }

    pub fn compose(&self, after: &AlgebraMap<S>) -> AlgebraMap<S> {
        AlgebraMap { images: self.images.iter().map(|v| after.apply(v)).collect(), target_dim: after.target_dim }
    }

    /// Largest defect of `f([x,y]) - [f x, f y]` over basis pairs.
    pub fn homomorphism_residual(&self, src: &LieAlgebra<S>, dst: &LieAlgebra<S>) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..src.dim {
            for j in i + 1..src.dim {
                let lhs = self.apply(&src.bracket_basis_dense(i, j));
                let rhs = dst.bracket(&self.images[i], &self.images[j]);
                for (a, b) in lhs.iter().zip(&rhs) {
                    worst = worst.max((a.clone() - b.clone()).to_f64().abs());
                }
            }
        }
        worst
    }
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds an algebra from the brackets `[e_i, e_j]` for `i < j`.
    pub fn from_upper_brackets(
        name: impl Into<String>,
        labels: Vec<String>,
        upper: impl Fn(usize, usize) -> Vec<(usize, S)>,
        simple_blocks: Vec<Range<usize>>,
    ) -> Self {
        let dim = labels.len();
        let mut brackets = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let mut v: Vec<(usize, S)> = upper(i, j).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_by_key(|(k, _)| *k);
                brackets[j * dim + i] = v.iter().map(|(k, c)| (*k, -c.clone())).collect();
                brackets[i * dim + j] = v;
            }
        }
        let mut alg = LieAlgebra {
            name: name.into(),
            dim,
            labels,
            brackets,
            killing: Mat::zeros(dim, dim),
            simple_blocks,
        };
        alg.killing = alg.compute_killing();
        alg
    }

    /// Nonzero coefficients of `[e_i, e_j]`.
    #[inline]
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.brackets[i * self.dim + j]
    }

    pub fn bracket_basis_dense(&self, i: usize, j: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        for (k, c) in self.bracket_basis(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Structure constant `c[i][j][k]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> S {
        self.bracket_basis(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let f = xi.clone() * yj.clone();
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] = out[*k].clone() + f.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Matrix of `ad x`: column `j` holds `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[S]) -> Mat<S> {
        let mut m: Mat<S> = Mat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in self.bracket_basis(i, j) {
                    let v = m.get(*k, j).clone() + xi.clone() * c.clone();
                    m.set(*k, j, v);
                }
            }
        }
        m
    }

    fn compute_killing(&self) -> Mat<S> {
        // killing[i][j] = sum_{a,b} c[i][a][b] c[j][b][a]
        let n = self.dim;
        let mut k = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = S::zero();
                for a in 0..n {
                    for (b, cab) in self.bracket_basis(i, a) {
                        for (aa, cba) in self.bracket_basis(j, *b) {
                            if *aa == a {
                                acc = acc + cab.clone() * cba.clone();
                            }
                        }
                    }
                }
                k.set(i, j, acc.clone());
                k.set(j, i, acc);
            }
        }
        k
    }

    pub fn killing_form(&self, x: &[S], y: &[S]) -> S {
        bilinear(&self.killing, x, y)
    }

    /// Largest Jacobi defect over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = vec![S::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, cm) in self.bracket_basis(a, b) {
                            for (l, cl) in self.bracket_basis(*m, c) {
                                acc[*l] = acc[*l].clone() + cm.clone() * cl.clone();
                            }
                        }
                    }
                    for v in &acc {
                        worst = worst.max(v.to_f64().abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest defect of `B([x,y],z) + B(y,[x,z]) = 0` over basis triples.
    pub fn killing_invariance_residual(&self) -> f64 {
        invariance_residual(self, &self.killing)
    }

    pub fn is_compact_semisimple(&self, tol: f64) -> bool {
        self.killing.scale(&-S::one()).is_positive_definite(tol)
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(|b| b.is_empty())
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            labels: self.labels.clone(),
            brackets: self.brackets.iter().map(|v| v.iter().map(|(k, c)| (*k, f(c))).collect()).collect(),
            killing: self.killing.map(&f),
            simple_blocks: self.simple_blocks.clone(),
        }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map_scalar(|x| x.to_f64())
    }

    /// Dense float copy of the structure constants, indexed `(i*dim + j)*dim + k`.
    pub fn dense_f64(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.bracket_basis(i, j) {
                    out[(i * n + j) * n + k] = c.to_f64();
                }
            }
        }
        out
    }

    /// Subalgebra spanned by `vectors` (coordinates in `self`), together with
    /// its inclusion map.
    pub fn subalgebra(
        &self,
        name: impl Into<String>,
        vectors: &[Vec<S>],
        tol: f64,
    ) -> Result<(LieAlgebra<S>, AlgebraMap<S>)> {
        let span = SpanCoords::new(vectors, tol)?;
        let m = vectors.len();
        let mut table = vec![Vec::new(); m * m];
        for a in 0..m {
            for b in a + 1..m {
                let br = self.bracket(&vectors[a], &vectors[b]);
                let c = span.coords_dense(&br, tol).ok_or_else(|| {
                    BrfError::Construction(format!("vectors do not span a subalgebra (pair {a},{b})"))
                })?;
                table[a * m + b] = c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            }
        }
        let labels = (0..m).map(|i| format!("v{i}")).collect();
        let sub = LieAlgebra::from_upper_brackets(name, labels, |i, j| table[i * m + j].clone(), Vec::new());
        Ok((sub, AlgebraMap { images: vectors.to_vec(), target_dim: self.dim }))
    }

    /// Serializes to `{name, dim, labels, c: [[i, j, k, value]]}` with `i < j`.
    pub fn to_json(&self) -> Value {
        let mut c = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, v) in self.bracket_basis(i, j) {
                    c.push(json!([i, j, k, v.to_json()]));
                }
            }
        }
        json!({ "name": self.name, "dim": self.dim, "labels": self.labels, "c": c })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| BrfError::Malformed(format!("algebra json: {m}"));
        let dim = v["dim"].as_u64().ok_or_else(|| bad("missing dim"))? as usize;
        let labels: Vec<String> = match v["labels"].as_array() {
            Some(a) => a.iter().map(|x| x.as_str().unwrap_or("").to_string()).collect(),
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        if labels.len() != dim {
            return Err(bad("labels length differs from dim"));
        }
        let mut table: Vec<Vec<(usize, S)>> = vec![Vec::new(); dim * dim];
        for entry in v["c"].as_array().ok_or_else(|| bad("missing c"))? {
            let e = entry.as_array().ok_or_else(|| bad("entry is not an array"))?;
            if e.len() != 4 {
                return Err(bad("entry must have 4 fields"));
            }
            let idx = |x: &Value| x.as_u64().map(|u| u as usize).filter(|&u| u < dim);
            let (i, j, k) = (
                idx(&e[0]).ok_or_else(|| bad("index"))?,
                idx(&e[1]).ok_or_else(|| bad("index"))?,
                idx(&e[2]).ok_or_else(|| bad("index"))?,
            );
            let val = S::from_json(&e[3]).ok_or_else(|| bad("value"))?;
            if i == j {
                return Err(bad("diagonal bracket entry"));
            }
            let (a, b, val) = if i < j { (i, j, val) } else { (j, i, -val) };
            table[a * dim + b].push((k, val));
        }
        let name = v["name"].as_str().unwrap_or("custom").to_string();
        Ok(LieAlgebra::from_upper_brackets(name, labels, |i, j| table[i * dim + j].clone(), Vec::new()))
    }
}

fn invariance_residual<S: Scalar>(alg: &LieAlgebra<S>, form: &Mat<S>) -> f64 {
    let n = alg.dim;
    let mut worst = 0.0f64;
    for x in 0..n {
        let ad = alg.ad_matrix(&unit::<S>(n, x));
        // form(ad x ·, ·) + form(·, ad x ·) = ad^T F + F ad
        let m = ad.transpose().mul(form).add(&form.mul(&ad));
        worst = worst.max(m.max_abs());
    }
    worst
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// Direct sum with block-diagonal structure constants.
pub fn direct_sum<S: Scalar>(a: &LieAlgebra<S>, b: &LieAlgebra<S>) -> LieAlgebra<S> {
    let (na, nb) = (a.dim, b.dim);
    let mut labels: Vec<String> = a.labels.iter().map(|l| format!("1:{l}")).collect();
    labels.extend(b.labels.iter().map(|l| format!("2:{l}")));
    let mut blocks = if a.simple_blocks.is_empty() { vec![0..na] } else { a.simple_blocks.clone() };
    if b.simple_blocks.is_empty() {
        blocks.push(na..na + nb);
    } else {
        blocks.extend(b.simple_blocks.iter().map(|r| r.start + na..r.end + na));
    }
    if a.is_abelian() || b.is_abelian() {
        blocks.clear();
    }
    LieAlgebra::from_upper_brackets(
        format!("{}+{}", a.name, b.name),
        labels,
        |i, j| {
            if j < na {
                a.bracket_basis(i, j).to_vec()
            } else if i >= na {
                b.bracket_basis(i - na, j - na).iter().map(|(k, c)| (k + na, c.clone())).collect()
            } else {
                Vec::new()
            }
        },
        blocks,
    )
}

/// Linear representation given by one matrix per basis element.
#[derive(Clone, Debug)]
pub struct Representation<S> {
    pub algebra_dim: usize,
    pub space_dim: usize,
    pub matrices: Vec<Mat<S>>,
}

impl<S: Scalar> Representation<S> {
    pub fn new(matrices: Vec<Mat<S>>, space_dim: usize) -> Self {
        Representation { algebra_dim: matrices.len(), space_dim, matrices }
    }

    pub fn adjoint(alg: &LieAlgebra<S>) -> Self {
        let m = (0..alg.dim).map(|i| alg.ad_matrix(&unit::<S>(alg.dim, i))).collect();
        Representation::new(m, alg.dim)
    }

    pub fn trivial(alg: &LieAlgebra<S>, space_dim: usize) -> Self {
        Representation::new(vec![Mat::zeros(space_dim, space_dim); alg.dim], space_dim)
    }

    pub fn of(&self, x: &[S]) -> Mat<S> {
        let mut m = Mat::zeros(self.space_dim, self.space_dim);
        for (xi, r) in x.iter().zip(&self.matrices) {
            if !xi.is_zero() {
                m = m.add(&r.scale(xi));
            }
        }
        m
    }

    /// Largest defect of `ρ([e_i,e_j]) = [ρ(e_i), ρ(e_j)]`.
    pub fn homomorphism_residual(&self, alg: &LieAlgebra<S>) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..alg.dim {
            for j in i + 1..alg.dim {
                let lhs = self.of(&alg.bracket_basis_dense(i, j));
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let rhs = a.mul(b).sub(&b.mul(a));
                worst = worst.max(lhs.sub(&rhs).max_abs());
            }
        }
        worst
    }
}

/// Casimir operator `-Σ ρ(X_i)²` over an `inner`-orthonormal basis, computed
/// as `-Σ (G⁻¹)_{ab} ρ_a ρ_b` so no square roots are needed.
pub fn casimir<S: Scalar>(
    rep: &Representation<S>,
    alg: &LieAlgebra<S>,
    inner: &Mat<S>,
    tol: f64,
) -> Result<Mat<S>> {
    if !inner.is_positive_definite(tol) {
        return Err(BrfError::Parameter("inner product is not positive definite".into()));
    }
    let inv_res = invariance_residual(alg, inner);
    let scale = inner.max_abs().max(1.0);
    if inv_res > tol.max(1e-9) * scale * 100.0 && !(S::EXACT && inv_res == 0.0) {
        return Err(BrfError::Parameter(format!("inner product is not ad-invariant (residual {inv_res:e})")));
    }
    casimir_unchecked(&rep.matrices, inner, tol)
}

/// Casimir without invariance checks, for representations of a subalgebra
/// given by its own Gram matrix.
pub fn casimir_unchecked<S: Scalar>(mats: &[Mat<S>], gram: &Mat<S>, tol: f64) -> Result<Mat<S>> {
    let ginv = gram.inverse(tol).ok_or_else(|| BrfError::Parameter("singular Gram matrix".into()))?;
    let n = mats.first().map_or(0, |m| m.rows);
    let mut out = Mat::zeros(n, n);
    for a in 0..mats.len() {
        for b in 0..mats.len() {
            let w = ginv.get(a, b);
            if w.is_negligible(0.0) {
                continue;
            }
            out = out.sub(&mats[a].mul(&mats[b]).scale(w));
        }
    }
    Ok(out)
}

/// Gram-Schmidt with respect to a symmetric positive-definite form.
pub fn orthonormal_basis(vectors: &[Vec<f64>], inner: &Mat<f64>) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        // two passes for numerical stability
        for _ in 0..2 {
            for u in &out {
                let p = bilinear(inner, u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= p * ui;
                }
            }
        }
        let n2 = bilinear(inner, &w, &w);
        let ref2 = bilinear(inner, v, v).abs().max(1e-300);
        if !(n2 > 1e-20 * ref2) {
            return Err(BrfError::DegenerateInput("vectors are linearly dependent or form is not positive".into()));
        }
        let s = 1.0 / n2.sqrt();
        out.push(w.into_iter().map(|x| x * s).collect());
    }
    Ok(out)
}

pub fn gram<S: Scalar>(vectors: &[Vec<S>], form: &Mat<S>) -> Mat<S> {
    let imgs: Vec<Vec<S>> = vectors.iter().map(|v| form.mul_vec(v)).collect();
    Mat::from_fn(vectors.len(), vectors.len(), |i, j| crate::linalg::dot(&vectors[i], &imgs[j]))
}

/// Dimension of the space of intertwiners `T` with `T ρ_A(Z) = ρ_B(Z) T`.
/// The count is the number of vanishing eigenvalues of `Σ L_Z^T L_Z`,
/// where `L_Z` is the Kronecker-sum operator.
pub fn intertwiner_dim(a: &[Mat<f64>], b: &[Mat<f64>], tol: f64) -> usize {
    let (da, db) = (a.first().map_or(0, |m| m.rows), b.first().map_or(0, |m| m.rows));
    if da == 0 || db == 0 {
        return 0;
    }
    let n = da * db;
    // T is db x da, vec index t = r*da + c
    let mut gram = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (ra, rb) in a.iter().zip(b) {
        let mut l = nalgebra::DMatrix::<f64>::zeros(n, n);
        for r in 0..db {
            for c in 0..da {
                let row = r * da + c;
                // (T ρ_A)_{rc} = Σ_k T_{rk} A_{kc}
                for k in 0..da {
                    let v = *ra.get(k, c);
                    if v != 0.0 {
                        l[(row, r * da + k)] += v;
                    }
                }
                // (ρ_B T)_{rc} = Σ_k B_{rk} T_{kc}
                for k in 0..db {
                    let v = *rb.get(r, k);
                    if v != 0.0 {
                        l[(row, k * da + c)] -= v;
                    }
                }
            }
        }
        gram += l.transpose() * &l;
    }
    let ev = gram.symmetric_eigenvalues();
    let scale = ev.iter().cloned().fold(0.0, f64::max).max(1.0);
    ev.iter().filter(|&&x| x.abs() <= tol * scale).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigenvalues;
    use crate::scalar::{q, Q};

    fn brute_killing(alg: &LieAlgebra<f64>) -> Mat<f64> {
        let n = alg.dim;
        Mat::from_fn(n, n, |i, j| {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += alg.c(i, a, b) * alg.c(j, b, a);
                }
            }
            s
        })
    }

    #[test]
    fn su2_killing_is_double_trace() {
        let su2 = build_su::<f64>(2);
        assert_eq!(su2.dim, 3);
        let k = brute_killing(&su2);
        assert!(k.sub(&su2.killing).max_abs() < 1e-14);
        // basis elements E12-E21, i(E12+E21), i(E11-E22) all have tr(X²) = -2,
        // so the double trace gives -8 on the diagonal
        for i in 0..3 {
            assert!((su2.killing.get(i, i) + 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn su2_antisymmetry() {
        let su2 = build_su::<Q>(2);
        for k in 0..3 {
            assert_eq!(su2.c(0, 1, k), -su2.c(1, 0, k));
        }
    }

    #[test]
    fn so3_matches_su2_spectrum_ratios() {
        let so3 = build_so::<f64>(3);
        let su2 = build_su::<f64>(2);
        let mut a = sym_eigenvalues(&so3.killing);
        let mut b = sym_eigenvalues(&su2.killing);
        let (na, nb) = (a[0], b[0]);
        a.iter_mut().for_each(|x| *x /= na);
        b.iter_mut().for_each(|x| *x /= nb);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let a = build_su::<Q>(2);
        let s = direct_sum(&a, &a);
        assert_eq!(s.dim, 6);
        for i in 0..3 {
            for j in 3..6 {
                assert!(s.killing.get(i, j).is_zero());
                assert!(s.bracket_basis(i, j).is_empty());
            }
        }
        let sf = s.to_f64();
        let ev = sym_eigenvalues(&sf.killing);
        let mut expect = sym_eigenvalues(&a.to_f64().killing);
        expect.extend(expect.clone());
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in ev.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_casimir_is_identity() {
        for alg in [build_su::<Q>(3), build_so::<Q>(4), build_sp::<Q>(1)] {
            let rep = Representation::adjoint(&alg);
            let inner = alg.killing.scale(&q(-1, 1));
            let cas = casimir(&rep, &alg, &inner, 0.0).unwrap();
            assert_eq!(cas, Mat::identity(alg.dim), "{}", alg.name);
        }
    }

    #[test]
    fn trivial_casimir_is_zero() {
        let alg = build_su::<Q>(2);
        let rep = Representation::trivial(&alg, 1);
        let inner = alg.killing.scale(&q(-1, 1));
        let cas = casimir(&rep, &alg, &inner, 0.0).unwrap();
        assert!(cas.is_zero_within(0.0));
    }

    #[test]
    fn casimir_rejects_indefinite_form() {
        let alg = build_su::<f64>(2);
        let rep = Representation::adjoint(&alg);
        assert!(matches!(casimir(&rep, &alg, &alg.killing, 1e-12), Err(BrfError::Parameter(_))));
    }

    #[test]
    fn gram_schmidt_trivial_cases() {
        let id = Mat::<f64>::identity(3);
        let e: Vec<Vec<f64>> = (0..3).map(|i| unit(3, i)).collect();
        assert_eq!(orthonormal_basis(&e, &id).unwrap(), e);
        let qf = Mat::from_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]);
        let one = orthonormal_basis(&[vec![1.0, 0.0]], &qf).unwrap();
        assert!((one[0][0] - 0.5).abs() < 1e-15);
        let dep = orthonormal_basis(&[vec![1.0, 0.0], vec![2.0, 0.0]], &Mat::identity(2));
        assert!(matches!(dep, Err(BrfError::DegenerateInput(_))));
    }

    #[test]
    fn intertwiners_of_su2_adjoint() {
        let alg = build_su::<f64>(2);
        let ad = Representation::adjoint(&alg);
        assert_eq!(intertwiner_dim(&ad.matrices, &ad.matrices, 1e-10), 1);
        let triv = Representation::trivial(&alg, 1);
        assert_eq!(intertwiner_dim(&ad.matrices, &triv.matrices, 1e-10), 0);
    }

    #[test]
    fn json_roundtrip_exact() {
        let alg = build_su::<Q>(3);
        let v = alg.to_json();
        assert!(v["c"][0][3]["num"].is_string());
        let back = LieAlgebra::<Q>::from_json(&v).unwrap();
        assert_eq!(back.killing, alg.killing);
    }
}
