//! Classical compact algebras, g₂, and small invariant-theory helpers used to
//! build embeddings.

use super::matrix::{CMat, MatrixAlgebra, SpanCoords};
use super::LieAlgebra;
use crate::error::{BrfError, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Associative calibration on R⁷ as `(i, j, k, sign)`, 1-based.
pub const G2_FORM: [(usize, usize, usize, i64); 7] = [
    (1, 2, 3, 1),
    (1, 4, 5, 1),
    (1, 6, 7, 1),
    (2, 4, 6, 1),
    (2, 5, 7, -1),
    (3, 4, 7, -1),
    (3, 5, 6, -1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalFamily {
    Su,
    So,
    Sp,
}

impl std::str::FromStr for ClassicalFamily {
    type Err = BrfError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Ok(ClassicalFamily::Su),
            "so" => Ok(ClassicalFamily::So),
            "sp" => Ok(ClassicalFamily::Sp),
            other => Err(BrfError::Parameter(format!("unsupported family `{other}`"))),
        }
    }
}

fn e<S: Scalar>(n: usize, i: usize, j: usize) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    m.set(i, j, S::one());
    m
}

/// Anti-Hermitian traceless basis of su(n) as complex matrices:
/// `E_jk - E_kj`, `i(E_jk + E_kj)` for `j < k`, then `i(E_jj - E_{j+1,j+1})`.
pub fn su_complex_basis<S: Scalar>(n: usize) -> (Vec<CMat<S>>, Vec<String>) {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let mut a = CMat::zeros(n);
            a.add_entry(j, k, S::one(), S::zero());
            a.add_entry(k, j, -S::one(), S::zero());
            basis.push(a);
            labels.push(format!("A{}{}", j + 1, k + 1));
            let mut b = CMat::zeros(n);
            b.add_entry(j, k, S::zero(), S::one());
            b.add_entry(k, j, S::zero(), S::one());
            basis.push(b);
            labels.push(format!("S{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n - 1 {
        let mut d = CMat::zeros(n);
        d.add_entry(j, j, S::zero(), S::one());
        d.add_entry(j + 1, j + 1, S::zero(), -S::one());
        basis.push(d);
        labels.push(format!("H{}", j + 1));
    }
    (basis, labels)
}

pub fn su_matrices<S: Scalar>(n: usize) -> Result<MatrixAlgebra<S>> {
    let (b, labels) = su_complex_basis::<S>(n);
    MatrixAlgebra::new(b.iter().map(|m| m.realify()).collect(), labels, 1e-12)
}

/// `E_jk - E_kj` for `j < k`.
pub fn so_matrices<S: Scalar>(n: usize) -> Result<MatrixAlgebra<S>> {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            basis.push(e::<S>(n, j, k).sub(&e(n, k, j)));
            labels.push(format!("A{}{}", j + 1, k + 1));
        }
    }
    MatrixAlgebra::new(basis, labels, 1e-12)
}

/// sp(n) inside u(2n) as `[[A, B], [-B̄, Ā]]` with `A ∈ u(n)`, `B` complex
/// symmetric.
pub fn sp_complex_basis<S: Scalar>(n: usize) -> (Vec<CMat<S>>, Vec<String>) {
    let m = 2 * n;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let one = S::one;
    let zero = S::zero;
    for j in 0..n {
        for k in j + 1..n {
            let mut a = CMat::zeros(m);
            for off in [0, n] {
                a.add_entry(j + off, k + off, one(), zero());
                a.add_entry(k + off, j + off, -one(), zero());
            }
            basis.push(a);
            labels.push(format!("A{}{}", j + 1, k + 1));
            let mut s = CMat::zeros(m);
            for (off, sg) in [(0, one()), (n, -one())] {
                s.add_entry(j + off, k + off, zero(), sg.clone());
                s.add_entry(k + off, j + off, zero(), sg);
            }
            basis.push(s);
            labels.push(format!("S{}{}", j + 1, k + 1));
        }
    }
    for j in 0..n {
        let mut d = CMat::zeros(m);
        d.add_entry(j, j, zero(), one());
        d.add_entry(j + n, j + n, zero(), -one());
        basis.push(d);
        labels.push(format!("H{}", j + 1));
    }
    for j in 0..n {
        for k in j..n {
            let mut r = CMat::zeros(m);
            let mut c = CMat::zeros(m);
            let pairs: Vec<(usize, usize)> = if j == k { vec![(j, j)] } else { vec![(j, k), (k, j)] };
            for (a, b) in pairs {
                r.add_entry(a, b + n, one(), zero());
                r.add_entry(a + n, b, -one(), zero());
                c.add_entry(a, b + n, zero(), one());
                c.add_entry(a + n, b, zero(), one());
            }
            basis.push(r);
            labels.push(format!("Br{}{}", j + 1, k + 1));
            basis.push(c);
            labels.push(format!("Bi{}{}", j + 1, k + 1));
        }
    }
    (basis, labels)
}

pub fn sp_matrices<S: Scalar>(n: usize) -> Result<MatrixAlgebra<S>> {
    let (b, labels) = sp_complex_basis::<S>(n);
    MatrixAlgebra::new(b.iter().map(|m| m.realify()).collect(), labels, 1e-12)
}

pub fn build_classical<S: Scalar>(family: ClassicalFamily, n: usize) -> Result<LieAlgebra<S>> {
    let (ok, name) = match family {
        ClassicalFamily::Su => (n >= 2, format!("su{n}")),
        ClassicalFamily::So => (n >= 3, format!("so{n}")),
        ClassicalFamily::Sp => (n >= 1, format!("sp{n}")),
    };
    if !ok {
        return Err(BrfError::Parameter(format!("rank {n} not supported for {family:?}")));
    }
    let mats = match family {
        ClassicalFamily::Su => su_matrices::<S>(n)?,
        ClassicalFamily::So => so_matrices::<S>(n)?,
        ClassicalFamily::Sp => sp_matrices::<S>(n)?,
    };
    let dim = mats.dim();
    let blocks = if family == ClassicalFamily::So && n == 4 { Vec::new() } else { vec![0..dim] };
    mats.to_lie_algebra(name, blocks, 1e-12)
}

/// su(n) with its fixed basis. Panics only on `n < 2`.
pub fn build_su<S: Scalar>(n: usize) -> LieAlgebra<S> {
    build_classical(ClassicalFamily::Su, n).expect("su(n) construction")
}

pub fn build_so<S: Scalar>(n: usize) -> LieAlgebra<S> {
    build_classical(ClassicalFamily::So, n).expect("so(n) construction")
}

pub fn build_sp<S: Scalar>(n: usize) -> LieAlgebra<S> {
    build_classical(ClassicalFamily::Sp, n).expect("sp(n) construction")
}

/// Strictly increasing index triples of `0..n`.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut t = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                t.push([a, b, c]);
            }
        }
    }
    t
}

/// Dense antisymmetric `n³` array from coefficients on increasing triples.
pub fn dense_three_form<S: Scalar>(n: usize, coeffs: &[([usize; 3], S)]) -> Vec<S> {
    let mut out = vec![S::zero(); n * n * n];
    for ([a, b, c], v) in coeffs {
        for (p, sg) in [
            ([*a, *b, *c], 1),
            ([*b, *c, *a], 1),
            ([*c, *a, *b], 1),
            ([*b, *a, *c], -1),
            ([*a, *c, *b], -1),
            ([*c, *b, *a], -1),
        ] {
            let val = if sg > 0 { v.clone() } else { -v.clone() };
            out[(p[0] * n + p[1]) * n + p[2]] = val;
        }
    }
    out
}

/// Infinitesimal action of `m` on a 3-form, listed on increasing triples:
/// `φ(mu, v, w) + φ(u, mv, w) + φ(u, v, mw)`.
pub fn three_form_action<S: Scalar>(m: &Mat<S>, phi: &[S], n: usize) -> Vec<S> {
    let at = |a: usize, b: usize, c: usize| &phi[(a * n + b) * n + c];
    triples(n)
        .into_iter()
        .map(|[a, b, c]| {
            let mut acc = S::zero();
            for k in 0..n {
                for (col, val) in [(a, at(k, b, c)), (b, at(a, k, c)), (c, at(a, b, k))] {
                    let mk = m.get(k, col);
                    if !mk.is_zero() && !val.is_zero() {
                        acc = acc + mk.clone() * val.clone();
                    }
                }
            }
            acc
        })
        .collect()
}

pub fn g2_form<S: Scalar>() -> Vec<S> {
    let coeffs: Vec<([usize; 3], S)> =
        G2_FORM.iter().map(|&(i, j, k, s)| ([i - 1, j - 1, k - 1], S::from_i64(s))).collect();
    dense_three_form(7, &coeffs)
}

/// Annihilator of a 3-form inside the span of the given matrices, as
/// coordinate vectors with respect to that span.
pub fn three_form_stabilizer<S: Scalar>(mats: &[Mat<S>], phi: &[S], n: usize, tol: f64) -> Vec<Vec<S>> {
    let cols: Vec<Vec<S>> = mats.iter().map(|m| three_form_action(m, phi, n)).collect();
    Mat::from_cols(&cols).nullspace(tol)
}

/// Compact g₂ as the stabilizer in so(7) of the associative calibration.
pub fn build_g2<S: Scalar>() -> Result<LieAlgebra<S>> {
    let so7m = so_matrices::<S>(7)?;
    let ns = three_form_stabilizer(&so7m.basis, &g2_form::<S>(), 7, 1e-10);
    if ns.len() != 14 {
        return Err(BrfError::Construction(format!("3-form stabilizer has dimension {}, expected 14", ns.len())));
    }
    let so7 = so7m.to_lie_algebra("so7", vec![0..21], 1e-12)?;
    let (mut g2, _) = so7.subalgebra("g2", &ns, 1e-10)?;
    g2.labels = (0..14).map(|i| format!("g{}", i + 1)).collect();
    g2.simple_blocks = vec![0..14];
    Ok(g2)
}

/// g₂ together with its coordinates inside so(7).
pub fn g2_in_so7<S: Scalar>() -> Result<Vec<Vec<S>>> {
    let so7m = so_matrices::<S>(7)?;
    Ok(three_form_stabilizer(&so7m.basis, &g2_form::<S>(), 7, 1e-10))
}

/// Monomials of degree `d` in three variables, as exponent triples.
fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Real irreducible representation of so(3) of dimension `2d + 1` on
/// harmonic polynomials of degree `d`, one matrix per `E_jk - E_kj`
/// (ordered as in [`so_matrices`]).
pub fn so3_irrep<S: Scalar>(d: usize) -> Result<Vec<Mat<S>>> {
    let mons = monomials(d);
    let idx = |e: [usize; 3]| mons.iter().position(|m| *m == e).expect("monomial index");
    // Laplacian from degree d to degree d-2
    let harmonic: Vec<Vec<S>> = if d < 2 {
        (0..mons.len()).map(|i| super::unit(mons.len(), i)).collect()
    } else {
        let low = monomials(d - 2);
        let lap = Mat::from_fn(low.len(), mons.len(), |r, c| {
            let m = mons[c];
            let mut v = S::zero();
            for ax in 0..3 {
                if m[ax] >= 2 {
                    let mut e = m;
                    e[ax] -= 2;
                    if e == low[r] {
                        v = v + S::from_i64((m[ax] * (m[ax] - 1)) as i64);
                    }
                }
            }
            v
        });
        lap.nullspace(1e-12)
    };
    if harmonic.len() != 2 * d + 1 {
        return Err(BrfError::Construction("harmonic polynomial space has wrong dimension".into()));
    }
    let span = SpanCoords::new(&harmonic, 1e-12)?;
    let so3 = so_matrices::<S>(3)?;
    let mut out = Vec::new();
    for a in &so3.basis {
        // (ρ(A)p)(v) = -Σ A_ij x_j ∂_i p
        let act = |p: &[S]| -> Vec<S> {
            let mut r = vec![S::zero(); mons.len()];
            for (c, coef) in p.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let m = mons[c];
                for i in 0..3 {
                    if m[i] == 0 {
                        continue;
                    }
                    for j in 0..3 {
                        let aij = a.get(i, j);
                        if aij.is_zero() {
                            continue;
                        }
                        let mut e = m;
                        e[i] -= 1;
                        e[j] += 1;
                        let k = idx(e);
                        r[k] = r[k].clone() - aij.clone() * coef.clone() * S::from_i64(m[i] as i64);
                    }
                }
            }
            r
        };
        let cols: Vec<Vec<S>> = harmonic
            .iter()
            .map(|h| {
                span.coords_dense(&act(h), 1e-10)
                    .ok_or_else(|| BrfError::Construction("harmonic space not invariant".into()))
            })
            .collect::<Result<_>>()?;
        out.push(Mat::from_cols(&cols));
    }
    Ok(out)
}

/// Invariant 3-forms of a representation, as coefficient vectors on
/// increasing triples.
pub fn invariant_three_forms<S: Scalar>(rep: &[Mat<S>], n: usize, tol: f64) -> Vec<Vec<S>> {
    let ts = triples(n);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let cols: Vec<Vec<Vec<S>>> = ts
        .iter()
        .map(|t| {
            let phi = dense_three_form(n, &[(*t, S::one())]);
            rep.iter().map(|m| three_form_action(m, &phi, n)).collect()
        })
        .collect();
    for g in 0..rep.len() {
        for r in 0..ts.len() {
            rows.push(cols.iter().map(|c| c[g][r].clone()).collect());
        }
    }
    Mat::from_rows(&rows).nullspace(tol)
}

/// Invariant symmetric bilinear forms `G` with `ρᵀG + Gρ = 0`.
pub fn invariant_symmetric_forms<S: Scalar>(rep: &[Mat<S>], n: usize, tol: f64) -> Vec<Mat<S>> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((i, j));
        }
    }
    let basis: Vec<Mat<S>> = pairs
        .iter()
        .map(|&(i, j)| {
            let mut g = Mat::zeros(n, n);
            g.set(i, j, S::one());
            g.set(j, i, S::one());
            g
        })
        .collect();
    let mut rows: Vec<Vec<S>> = Vec::new();
    let imgs: Vec<Vec<Vec<S>>> = basis
        .iter()
        .map(|g| rep.iter().map(|m| m.transpose().mul(g).add(&g.mul(m)).data).collect())
        .collect();
    for gi in 0..rep.len() {
        for r in 0..n * n {
            rows.push(imgs.iter().map(|im| im[gi][r].clone()).collect());
        }
    }
    Mat::from_rows(&rows)
        .nullspace(tol)
        .into_iter()
        .map(|c| {
            let mut g = Mat::zeros(n, n);
            for (coef, b) in c.iter().zip(&basis) {
                g = g.add(&b.scale(coef));
            }
            g
        })
        .collect()
}

fn gl_basis<S: Scalar>(n: usize) -> Vec<Mat<S>> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            v.push(e(n, i, j));
        }
    }
    v
}

/// Matrix algebra `{M ∈ gl(n) : M·φ = 0}`.
pub fn gl_three_form_stabilizer<S: Scalar>(phi: &[S], n: usize, tol: f64) -> Result<MatrixAlgebra<S>> {
    let gl = gl_basis::<S>(n);
    let ns = three_form_stabilizer(&gl, phi, n, tol);
    let mats: Vec<Mat<S>> = ns
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (coef, b) in c.iter().zip(&gl) {
                if !coef.is_zero() {
                    m = m.add(&b.scale(coef));
                }
            }
            m
        })
        .collect();
    let labels = (0..mats.len()).map(|i| format!("s{}", i + 1)).collect();
    MatrixAlgebra::new(mats, labels, tol)
}

/// Matrix algebra `{M ∈ gl(n) : MᵀG + GM = 0}`.
pub fn orthogonal_algebra<S: Scalar>(g: &Mat<S>, tol: f64) -> Result<MatrixAlgebra<S>> {
    let n = g.rows;
    let gl = gl_basis::<S>(n);
    let cols: Vec<Vec<S>> = gl.iter().map(|m| m.transpose().mul(g).add(&g.mul(m)).data).collect();
    let ns = Mat::from_cols(&cols).nullspace(tol);
    let mats: Vec<Mat<S>> = ns
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (coef, b) in c.iter().zip(&gl) {
                if !coef.is_zero() {
                    m = m.add(&b.scale(coef));
                }
            }
            m
        })
        .collect();
    let labels = (0..mats.len()).map(|i| format!("o{}", i + 1)).collect();
    MatrixAlgebra::new(mats, labels, tol)
}
