//! Built-in embeddings `K ⊂ G₁×G₂`.

use super::Embedding;
use crate::error::{BrfError, Result};
use crate::liealg::{
    build_g2, build_so, build_sp, build_su, g2_in_so7, gl_three_form_stabilizer, invariant_symmetric_forms,
    invariant_three_forms, orthogonal_algebra, so3_irrep, so_matrices, sp_complex_basis, su_matrices, triples,
    dense_three_form, CMat, LieAlgebra,
};
use crate::linalg::Mat;
use crate::scalar::Scalar;

const TOL: f64 = 1e-10;

/// Position of `E_jk - E_kj` in the so(n) basis.
pub fn so_index(j: usize, k: usize, n: usize) -> usize {
    let (j, k) = if j < k { (j, k) } else { (k, j) };
    // pairs (a, b), a < b, in lexicographic order
    j * (2 * n - j - 1) / 2 + (k - j - 1)
}

fn zeros<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

/// so(n) ⊂ su(n) as real antisymmetric matrices.
pub fn so_in_su<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    let dsu = n * n - 1;
    let mut out = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let mut v = zeros::<S>(dsu);
            v[2 * so_index(j, k, n)] = S::one();
            out.push(v);
        }
    }
    out
}

/// so(n-1) ⊂ so(n) on the first `n-1` coordinates.
pub fn so_in_so<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    let d = n * (n - 1) / 2;
    let mut out = Vec::new();
    for j in 0..n - 1 {
        for k in j + 1..n - 1 {
            let mut v = zeros::<S>(d);
            v[so_index(j, k, n)] = S::one();
            out.push(v);
        }
    }
    out
}

/// Re-expresses so(n-1) coordinates in so(n).
fn lift_so<S: Scalar>(v: &[S], n: usize) -> Vec<S> {
    let mut out = zeros::<S>(n * (n - 1) / 2);
    for j in 0..n - 1 {
        for k in j + 1..n - 1 {
            out[so_index(j, k, n)] = v[so_index(j, k, n - 1)].clone();
        }
    }
    out
}

/// sp(n) ⊂ su(2n).
pub fn sp_in_su<S: Scalar>(n: usize) -> Result<Vec<Vec<S>>> {
    let su = su_matrices::<S>(2 * n)?;
    let (basis, _) = sp_complex_basis::<S>(n);
    basis
        .iter()
        .map(|m| su.coords(&m.realify(), TOL).ok_or_else(|| BrfError::Construction("sp(n) not inside su(2n)".into())))
        .collect()
}

fn abelian<S: Scalar>(name: &str) -> LieAlgebra<S> {
    LieAlgebra::from_upper_brackets(name, vec!["t".into()], |_, _| Vec::new(), Vec::new())
}

/// `S¹_{p,q} ⊂ SU(2)×SU(2)` generated by `(p·H, q·H)`, `H = i·diag(1,-1)`.
pub fn s1_pq<S: Scalar>(p: i64, q: i64) -> Result<Embedding<S>> {
    if p == 0 || q == 0 {
        return Err(BrfError::Misuse("S¹ must project nontrivially to both factors".into()));
    }
    let su2 = build_su::<S>(2);
    let h = |c: i64| vec![S::zero(), S::zero(), S::from_i64(c)];
    Embedding::new(
        format!("su2xsu2_s1_{p}{q}"),
        su2.clone(),
        su2,
        abelian("u1"),
        vec![h(p)],
        vec![h(q)],
        0..1,
        vec![],
        TOL,
    )
}

/// `S¹ ⊂ SU(2)×SU(3)` generated by `(diag(i,-i), diag(i,0,-i))`.
pub fn su2xsu3_s1<S: Scalar>() -> Result<Embedding<S>> {
    let mut a = zeros::<S>(3);
    a[2] = S::one();
    let mut b = zeros::<S>(8);
    b[6] = S::one();
    b[7] = S::one();
    Embedding::new("su2xsu3_s1", build_su(2), build_su(3), abelian("u1"), vec![a], vec![b], 0..1, vec![], TOL)
}

/// `ΔK ⊂ G×G` for a simple `k` embedded in `g` by `images`.
pub fn diagonal<S: Scalar>(name: &str, g: LieAlgebra<S>, k: LieAlgebra<S>, images: Vec<Vec<S>>) -> Result<Embedding<S>> {
    let kd = k.dim;
    Embedding::new(name, g.clone(), g, k, images.clone(), images, 0..0, vec![0..kd], TOL)
}

pub fn su3xsu3_so3<S: Scalar>() -> Result<Embedding<S>> {
    diagonal("su3xsu3_so3", build_su(3), build_so(3), so_in_su(3))
}

pub fn su4xsu4_sp2<S: Scalar>() -> Result<Embedding<S>> {
    diagonal("su4xsu4_sp2", build_su(4), build_sp(2), sp_in_su(2)?)
}

/// `G₂ ⊂ SO(7) ⊂ SO(8)` in the first factor, `G₂ ⊂ SO(7)` in the second.
pub fn so8xso7_g2<S: Scalar>() -> Result<Embedding<S>> {
    let g2 = build_g2::<S>()?;
    let in7 = g2_in_so7::<S>()?;
    let in8: Vec<Vec<S>> = in7.iter().map(|v| lift_so(v, 8)).collect();
    Embedding::new("so8xso7_g2", build_so(8), build_so(7), g2, in8, in7, 0..0, vec![0..14], TOL)
}

/// `SO(7) ⊂ SU(7)` and `SO(7) ⊂ SO(8)`.
pub fn su7xso8_so7<S: Scalar>() -> Result<Embedding<S>> {
    Embedding::new(
        "su7xso8_so7",
        build_su(7),
        build_so(8),
        build_so(7),
        so_in_su(7),
        so_in_so(8),
        0..0,
        vec![0..21],
        TOL,
    )
}

fn pauli<S: Scalar>() -> [CMat<S>; 4] {
    let mut id = CMat::zeros(2);
    id.add_entry(0, 0, S::one(), S::zero());
    id.add_entry(1, 1, S::one(), S::zero());
    let mut s1 = CMat::zeros(2);
    s1.add_entry(0, 1, S::one(), S::zero());
    s1.add_entry(1, 0, S::one(), S::zero());
    let mut s2 = CMat::zeros(2);
    s2.add_entry(0, 1, S::zero(), -S::one());
    s2.add_entry(1, 0, S::zero(), S::one());
    let mut s3 = CMat::zeros(2);
    s3.add_entry(0, 0, S::one(), S::zero());
    s3.add_entry(1, 1, -S::one(), S::zero());
    [id, s1, s2, s3]
}

/// Hermitian generators of Cl(5) on C⁴.
pub fn gamma5<S: Scalar>() -> [CMat<S>; 5] {
    let [id, s1, s2, s3] = pauli::<S>();
    [s1.kron(&id), s2.kron(&id), s3.kron(&s1), s3.kron(&s2), s3.kron(&s3)]
}

/// `Sp(2) ≅ Spin(5)`: adjoint action on `Λ²R⁵ = R¹⁰` into SO(10), spin
/// representation `E_jk - E_kj ↦ ½γ_jγ_k` into SU(4).
pub fn so10xsu4_sp2<S: Scalar>() -> Result<Embedding<S>> {
    let k = build_so::<S>(5);
    let so10 = so_matrices::<S>(10)?;
    let mut im1 = Vec::new();
    for a in 0..10 {
        let ad = k.ad_matrix(&crate::liealg::unit(10, a));
        im1.push(so10.coords(&ad, TOL).ok_or_else(|| BrfError::Construction("ad so(5) not antisymmetric".into()))?);
    }
    let su4 = su_matrices::<S>(4)?;
    let g = gamma5::<S>();
    let half = S::from_ratio(1, 2);
    let mut im2 = Vec::new();
    for j in 0..5 {
        for l in j + 1..5 {
            let m = g[j].mul(&g[l]).scale(&half);
            im2.push(su4.coords(&m.realify(), TOL).ok_or_else(|| BrfError::Construction("spin map not in su(4)".into()))?);
        }
    }
    Embedding::new("so10xsu4_sp2", build_so(10), build_su(4), k, im1, im2, 0..0, vec![0..10], TOL)
}

/// Principal `SU(2)` in `G₂` and in `Sp(2) ≅ SO(5)`: `so(3)` acts on
/// harmonic cubics (R⁷) preserving a unique 3-form whose stabilizer is g₂,
/// and on harmonic quadratics (R⁵) preserving a unique quadratic form.
pub fn g2xsp2_su2<S: Scalar>() -> Result<Embedding<S>> {
    let k = build_so::<S>(3);
    let r3 = so3_irrep::<S>(3)?;
    let forms = invariant_three_forms(&r3, 7, TOL);
    if forms.len() != 1 {
        return Err(BrfError::Construction("expected a unique invariant 3-form on R⁷".into()));
    }
    let coeffs: Vec<([usize; 3], S)> = triples(7).into_iter().zip(forms[0].clone()).collect();
    let phi = dense_three_form(7, &coeffs);
    let g1m = gl_three_form_stabilizer(&phi, 7, TOL)?;
    if g1m.dim() != 14 {
        return Err(BrfError::Construction(format!("3-form stabilizer has dimension {}", g1m.dim())));
    }
    let g1 = g1m.to_lie_algebra("g2", vec![0..14], TOL)?;
    let im1 = r3
        .iter()
        .map(|m| g1m.coords(m, TOL).ok_or_else(|| BrfError::Construction("so(3) not inside g2".into())))
        .collect::<Result<Vec<_>>>()?;
    let r2 = so3_irrep::<S>(2)?;
    let qf = invariant_symmetric_forms(&r2, 5, TOL);
    if qf.len() != 1 {
        return Err(BrfError::Construction("expected a unique invariant quadratic form on R⁵".into()));
    }
    let g2m = orthogonal_algebra(&qf[0], TOL)?;
    let g2 = g2m.to_lie_algebra("sp2", vec![0..10], TOL)?;
    let im2 = r2
        .iter()
        .map(|m| g2m.coords(m, TOL).ok_or_else(|| BrfError::Construction("so(3) not inside so(5)".into())))
        .collect::<Result<Vec<_>>>()?;
    Embedding::new("g2xsp2_su2", g1, g2, k, im1, im2, 0..0, vec![0..3], TOL)
}

/// `SU(3) ⊂ G₂` as the stabilizer of `e₁`, diagonally in `G₂×G₂`.
pub fn g2xg2_su3<S: Scalar>() -> Result<Embedding<S>> {
    let g2 = build_g2::<S>()?;
    let in7 = g2_in_so7::<S>()?;
    let so7 = so_matrices::<S>(7)?;
    // g₂ coordinates x with (Σ x_a M_a) e₁ = 0
    let cols: Vec<Vec<S>> = in7.iter().map(|v| so7.element(v).col(0)).collect();
    let ns = Mat::from_cols(&cols).nullspace(TOL);
    if ns.len() != 8 {
        return Err(BrfError::Construction(format!("stabilizer of e1 in g2 has dimension {}", ns.len())));
    }
    let (mut k, _) = g2.subalgebra("su3", &ns, TOL)?;
    k.simple_blocks = vec![0..8];
    diagonal("g2xg2_su3", g2, k, ns)
}


/// Built-in embedding by identifier.
pub fn builtin_embedding<S: Scalar>(id: &str) -> Result<Embedding<S>> {
    if let Some(rest) = id.strip_prefix("su2xsu2_s1_") {
        let parts: Vec<&str> = if rest.contains('_') {
            rest.split('_').collect()
        } else if rest.len() == 2 {
            vec![&rest[..1], &rest[1..]]
        } else {
            return Err(BrfError::UnknownSpace(id.into()));
        };
        let p: i64 = parts[0].parse().map_err(|_| BrfError::UnknownSpace(id.into()))?;
        let q: i64 = parts.get(1).and_then(|x| x.parse().ok()).ok_or_else(|| BrfError::UnknownSpace(id.into()))?;
        return s1_pq(p, q);
    }
    match id {
        "su2xsu3_s1" => su2xsu3_s1(),
        "su3xsu3_so3" => su3xsu3_so3(),
        "su4xsu4_sp2" => su4xsu4_sp2(),
        "so8xso7_g2" => so8xso7_g2(),
        "so10xsu4_sp2" => so10xsu4_sp2(),
        "su7xso8_so7" => su7xso8_so7(),
        "g2xsp2_su2" => g2xsp2_su2(),
        "g2xg2_su3" => g2xg2_su3(),
        _ => Err(BrfError::UnknownSpace(id.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligned::verify_alignment;
    use crate::scalar::{q, Q};

    #[test]
    fn so_index_is_lexicographic() {
        let mut i = 0;
        for j in 0..6 {
            for k in j + 1..6 {
                assert_eq!(so_index(j, k, 6), i);
                i += 1;
            }
        }
    }

    #[test]
    fn diagonal_has_c1_two() {
        let al = verify_alignment(&su3xsu3_so3::<Q>().unwrap(), 0.0).unwrap();
        assert_eq!(al.c1, q(2, 1));
        assert_eq!(al.lambdas, vec![q(1, 12)]);
    }

    #[test]
    fn gamma_matrices_anticommute() {
        let g = gamma5::<Q>();
        for a in 0..5 {
            for b in 0..5 {
                let s = g[a].mul(&g[b]).add(&g[b].mul(&g[a]));
                let expect = if a == b { q(2, 1) } else { q(0, 1) };
                for i in 0..4 {
                    for j in 0..4 {
                        let e = if i == j { expect.clone() } else { q(0, 1) };
                        assert_eq!(*s.re.get(i, j), e);
                        assert_eq!(*s.im.get(i, j), q(0, 1));
                    }
                }
            }
        }
    }
}
