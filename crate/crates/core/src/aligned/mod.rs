//! Aligned homogeneous spaces `G₁×G₂/K`: embeddings, Killing constants,
//! isotropy Casimirs and the z₁-dependent adapted frame.

mod embeddings;
mod spec_file;

pub use embeddings::*;
pub use spec_file::{parse_space_spec, SpaceSpec};

use crate::curvature::ReductiveFrame;
use crate::error::{BrfError, Result};
use crate::liealg::{casimir_unchecked, direct_sum, intertwiner_dim, orthonormal_basis, AlgebraMap, LieAlgebra, SpanCoords};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use serde::Serialize;
use std::ops::Range;

/// Inclusion `K ⊂ G₁×G₂`, given by the two projections of a basis of `k`.
#[derive(Clone, Debug)]
pub struct Embedding<S> {
    pub name: String,
    pub g1: LieAlgebra<S>,
    pub g2: LieAlgebra<S>,
    pub k: LieAlgebra<S>,
    pub iota1: AlgebraMap<S>,
    pub iota2: AlgebraMap<S>,
    /// Basis range of the center of `k`.
    pub center: Range<usize>,
    /// Basis ranges of the simple ideals of `k`.
    pub simple: Vec<Range<usize>>,
    pub swapped: bool,
}

fn hom_tol<S: Scalar>(tol: f64) -> f64 {
    if S::EXACT {
        0.0
    } else {
        tol
    }
}

impl<S: Scalar> Embedding<S> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        g1: LieAlgebra<S>,
        g2: LieAlgebra<S>,
        k: LieAlgebra<S>,
        images1: Vec<Vec<S>>,
        images2: Vec<Vec<S>>,
        center: Range<usize>,
        simple: Vec<Range<usize>>,
        tol: f64,
    ) -> Result<Self> {
        let name = name.into();
        if images1.len() != k.dim || images2.len() != k.dim {
            return Err(BrfError::Malformed("image count differs from dim k".into()));
        }
        if images1.iter().any(|v| v.len() != g1.dim) || images2.iter().any(|v| v.len() != g2.dim) {
            return Err(BrfError::Malformed("image vector length differs from factor dimension".into()));
        }
        let iota1 = AlgebraMap { images: images1, target_dim: g1.dim };
        let iota2 = AlgebraMap { images: images2, target_dim: g2.dim };
        for (i, (map, g)) in [(&iota1, &g1), (&iota2, &g2)].into_iter().enumerate() {
            let r = map.homomorphism_residual(&k, g);
            if r > hom_tol::<S>(tol) {
                return Err(BrfError::Construction(format!(
                    "projection to factor {} is not a homomorphism (residual {r:e})",
                    i + 1
                )));
            }
            if k.dim > 0 && Mat::from_rows(&map.images).rank(tol) != k.dim {
                return Err(BrfError::Misuse(format!("projection of k to factor {} is not injective", i + 1)));
            }
        }
        let mut covered = vec![false; k.dim];
        for r in std::iter::once(&center).chain(simple.iter()) {
            for i in r.clone() {
                if i >= k.dim || covered[i] {
                    return Err(BrfError::Malformed("ideal ranges do not partition k".into()));
                }
                covered[i] = true;
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(BrfError::Malformed("ideal ranges do not partition k".into()));
        }
        for i in center.clone() {
            for j in 0..k.dim {
                if !k.bracket_basis(i, j).is_empty() && k.bracket_basis(i, j).iter().any(|(_, c)| !c.is_negligible(tol)) {
                    return Err(BrfError::Malformed("declared center is not central".into()));
                }
            }
        }
        for r in &simple {
            for i in 0..k.dim {
                for j in r.clone() {
                    if k.bracket_basis(i, j).iter().any(|(m, c)| !r.contains(m) && !c.is_negligible(tol)) {
                        return Err(BrfError::Malformed("declared simple block is not an ideal".into()));
                    }
                }
            }
        }
        Ok(Embedding { name, g1, g2, k, iota1, iota2, center, simple, swapped: false })
    }

    /// Exchanges the two factors.
    pub fn swap(self) -> Self {
        Embedding {
            name: self.name,
            g1: self.g2,
            g2: self.g1,
            k: self.k,
            iota1: self.iota2,
            iota2: self.iota1,
            center: self.center,
            simple: self.simple,
            swapped: !self.swapped,
        }
    }

    pub fn total(&self) -> LieAlgebra<S> {
        direct_sum(&self.g1, &self.g2)
    }

    /// Basis of `k` in coordinates of `g₁⊕g₂`.
    pub fn k_vectors(&self) -> Vec<Vec<S>> {
        self.iota1
            .images
            .iter()
            .zip(&self.iota2.images)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect()
    }

    /// Center first (if nonzero), then the simple ideals.
    pub fn ideals(&self) -> Vec<(Range<usize>, bool)> {
        let mut v = Vec::new();
        if !self.center.is_empty() {
            v.push((self.center.clone(), true));
        }
        v.extend(self.simple.iter().map(|r| (r.clone(), false)));
        v
    }

    pub fn manifold_dim(&self) -> usize {
        self.g1.dim + self.g2.dim - self.k.dim
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Embedding<T> {
        let m = |a: &AlgebraMap<S>| AlgebraMap {
            images: a.images.iter().map(|v| v.iter().map(f).collect()).collect(),
            target_dim: a.target_dim,
        };
        Embedding {
            name: self.name.clone(),
            g1: self.g1.map_scalar(f),
            g2: self.g2.map_scalar(f),
            k: self.k.map_scalar(f),
            iota1: m(&self.iota1),
            iota2: m(&self.iota2),
            center: self.center.clone(),
            simple: self.simple.clone(),
            swapped: self.swapped,
        }
    }

    pub fn to_f64(&self) -> Embedding<f64> {
        self.map_scalar(|x| x.to_f64())
    }

    /// Pullback `ι_iᵀ B_{g_i} ι_i` to the basis of `k`.
    pub fn pulled_killing(&self, factor: usize) -> Mat<S> {
        let (g, iota) = if factor == 1 { (&self.g1, &self.iota1) } else { (&self.g2, &self.iota2) };
        crate::liealg::gram(&iota.images, &g.killing)
    }
}

/// Killing constants of an aligned embedding.
#[derive(Clone, Debug)]
pub struct Alignment<S> {
    pub c1: S,
    pub c2: S,
    /// One entry per ideal, center first; `λ = 0` on the center.
    pub lambdas: Vec<S>,
    pub ideals: Vec<(Range<usize>, bool)>,
    /// `(c_{1l}, c_{2l})` per ideal.
    pub c_il: Vec<(S, S)>,
    pub residual: f64,
}

fn sub_block<S: Scalar>(m: &Mat<S>, r: &Range<usize>) -> Mat<S> {
    Mat::from_fn(r.len(), r.len(), |i, j| m.get(r.start + i, r.start + j).clone())
}

/// Finds `t` with `a = t·b` and the max-norm defect.
fn proportionality<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Result<(S, f64)> {
    let tb = b.trace();
    if tb.is_zero() {
        return Err(BrfError::Misuse("zero Gram matrix on k".into()));
    }
    let t = a.trace() / tb;
    let res = a.sub(&b.scale(&t)).max_abs();
    Ok((t, res))
}

/// Checks alignment and returns `c₁, c₂` and the `λ_l`.
pub fn verify_alignment<S: Scalar>(emb: &Embedding<S>, tol: f64) -> Result<Alignment<S>> {
    let g1 = emb.pulled_killing(1);
    let g2 = emb.pulled_killing(2);
    if g1.is_zero_within(0.0) || g2.is_zero_within(0.0) {
        return Err(BrfError::Misuse("k has zero projection to a factor".into()));
    }
    let g = g1.add(&g2);
    let (inv_c1, r1) = proportionality(&g1, &g)?;
    let scale = g.max_abs().max(1.0);
    let accept = |r: f64| if S::EXACT { r == 0.0 } else { r <= tol * scale };
    if !accept(r1) {
        return Err(BrfError::NotAligned {
            reason: "Killing forms of the factors are not proportional on k".into(),
            residual: r1,
        });
    }
    let c1 = inv_c1.recip();
    let c2 = c1.clone() / (c1.clone() - S::one());
    let mut worst = r1;
    let mut lambdas = Vec::new();
    let mut c_il = Vec::new();
    let ideals = emb.ideals();
    for (r, is_center) in &ideals {
        if *is_center {
            lambdas.push(S::zero());
            c_il.push((S::zero(), S::zero()));
            continue;
        }
        let bk = sub_block(&emb.k.killing, r);
        let (lam, rl) = proportionality(&bk, &sub_block(&g, r))?;
        if !accept(rl) {
            return Err(BrfError::NotAligned {
                reason: format!("Killing form of ideal {:?} is not proportional to B_g", r),
                residual: rl,
            });
        }
        worst = worst.max(rl);
        let (c1l, r1l) = proportionality(&bk, &sub_block(&g1, r))?;
        let (c2l, r2l) = proportionality(&bk, &sub_block(&g2, r))?;
        let d1 = (c1l.clone() - lam.clone() * c1.clone()).to_f64().abs();
        let d2 = (c2l.clone() - lam.clone() * c2.clone()).to_f64().abs();
        worst = worst.max(r1l).max(r2l).max(d1).max(d2);
        if !accept(d1.max(d2).max(r1l).max(r2l)) {
            return Err(BrfError::NotAligned { reason: "c_il differ from λ_l c_i".into(), residual: d1.max(d2) });
        }
        if !(c1l < S::one() && c2l < S::one()) {
            return Err(BrfError::NotAligned {
                reason: "ideal is not a proper subalgebra of a factor (c_il ≥ 1)".into(),
                residual: 0.0,
            });
        }
        lambdas.push(lam);
        c_il.push((c1l, c2l));
    }
    Ok(Alignment { c1, c2, lambdas, ideals, c_il, residual: worst })
}

/// Isotropy representation of `k` on `p_i` and its Casimir `cas_{χ_i}`.
#[derive(Clone, Debug)]
pub struct Isotropy<S> {
    /// Basis of `p_i` in coordinates of `g_i`.
    pub p_basis: Vec<Vec<S>>,
    /// `ad(ι_i Z_a)|_{p_i}` in that basis, one per basis element of `k`.
    pub rep: Vec<Mat<S>>,
    /// `cas_{χ_i}` with respect to `-B_{g_i}` on `π_i(k)`.
    pub cas: Mat<S>,
    pub kappa: Option<S>,
}

pub fn isotropy<S: Scalar>(emb: &Embedding<S>, factor: usize, tol: f64) -> Result<Isotropy<S>> {
    let (g, iota) = if factor == 1 { (&emb.g1, &emb.iota1) } else { (&emb.g2, &emb.iota2) };
    // p_i = {X : B_i(X, ι_i Z) = 0 for all Z}
    let rows: Vec<Vec<S>> = iota.images.iter().map(|v| g.killing.mul_vec(v)).collect();
    let p_basis = if rows.is_empty() {
        (0..g.dim).map(|i| crate::liealg::unit(g.dim, i)).collect()
    } else {
        Mat::from_rows(&rows).nullspace(tol)
    };
    if p_basis.len() + emb.k.dim != g.dim {
        return Err(BrfError::InternalInconsistency("complement of π_i(k) has wrong dimension".into()));
    }
    let span = SpanCoords::new(&p_basis, tol)?;
    let mut rep = Vec::with_capacity(emb.k.dim);
    for z in &iota.images {
        let cols: Vec<Vec<S>> = p_basis
            .iter()
            .map(|v| {
                span.coords_dense(&g.bracket(z, v), tol.max(1e-12) * 1e2)
                    .ok_or_else(|| BrfError::InternalInconsistency("p_i is not ad(k)-invariant".into()))
            })
            .collect::<Result<_>>()?;
        rep.push(Mat::from_cols(&cols));
    }
    let gram = emb.pulled_killing(factor).scale(&-S::one());
    let cas = if p_basis.is_empty() {
        Mat::zeros(0, 0)
    } else {
        casimir_unchecked(&rep, &gram, tol)?
    };
    let kappa = cas.scalar_multiple_of_identity(tol.max(1e-12) * 1e3);
    Ok(Isotropy { p_basis, rep, cas, kappa })
}

/// Outcome of the sufficient intertwiner test for the standing assumption.
#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    /// `(p_i, k-factor, dim Hom_k)` for each tested pair.
    pub intertwiners: Vec<(String, String, usize)>,
    pub holds: bool,
    pub advisory: bool,
    pub note: String,
}

fn check_assumption(emb: &Embedding<f64>, iso: [&Isotropy<f64>; 2]) -> AssumptionReport {
    let mut pairs = Vec::new();
    for (i, is) in iso.iter().enumerate() {
        if is.p_basis.is_empty() {
            continue;
        }
        for (r, is_center) in emb.ideals() {
            if is_center {
                let triv = vec![Mat::zeros(1, 1); emb.k.dim];
                // one trivial summand per center direction is the same test
                let d = intertwiner_dim(&is.rep, &triv, 1e-9);
                pairs.push((format!("p{}", i + 1), "trivial".to_string(), d));
            } else {
                let ad: Vec<Mat<f64>> = (0..emb.k.dim)
                    .map(|a| {
                        let full = emb.k.ad_matrix(&crate::liealg::unit(emb.k.dim, a));
                        sub_block(&full, &r)
                    })
                    .collect();
                let d = intertwiner_dim(&is.rep, &ad, 1e-9);
                pairs.push((format!("p{}", i + 1), format!("k[{}..{}]", r.start, r.end), d));
            }
        }
    }
    let holds = pairs.iter().all(|p| p.2 == 0);
    AssumptionReport {
        intertwiners: pairs,
        holds,
        advisory: !holds,
        note: if holds {
            "no intertwiner between p_i and any factor of k".into()
        } else {
            "intertwiner found; harmonicity is checked numerically instead".into()
        },
    }
}

/// Everything about the space that does not depend on the metric.
#[derive(Clone, Debug)]
pub struct AlgebraicConstants<S> {
    pub name: String,
    /// `(dim p₁, dim p₂, dim p₃)`.
    pub dims: [usize; 3],
    pub c1: S,
    pub c2: S,
    pub lambdas: Vec<S>,
    pub ideals: Vec<(Range<usize>, bool)>,
    pub c_il: Vec<(S, S)>,
    pub iso: [Isotropy<S>; 2],
    pub swapped: bool,
    pub alignment_residual: f64,
    pub assumption: AssumptionReport,
}

impl<S: Scalar> AlgebraicConstants<S> {
    pub fn kappa(&self, i: usize) -> Option<&S> {
        self.iso[i - 1].kappa.as_ref()
    }

    pub fn ideal_dims(&self) -> Vec<usize> {
        self.ideals.iter().map(|(r, _)| r.len()).collect()
    }

    /// Single `λ` when all ideals share it and `k` has no center.
    pub fn uniform_lambda(&self) -> Option<S> {
        if self.ideals.iter().any(|(_, c)| *c) || self.lambdas.is_empty() {
            return None;
        }
        let l = self.lambdas[0].clone();
        self.lambdas.iter().all(|x| (x.clone() - l.clone()).is_negligible(1e-12)).then_some(l)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> AlgebraicConstants<T> {
        let iso = |i: &Isotropy<S>| Isotropy {
            p_basis: i.p_basis.iter().map(|v| v.iter().map(f).collect()).collect(),
            rep: i.rep.iter().map(|m| m.map(f)).collect(),
            cas: i.cas.map(f),
            kappa: i.kappa.as_ref().map(f),
        };
        AlgebraicConstants {
            name: self.name.clone(),
            dims: self.dims,
            c1: f(&self.c1),
            c2: f(&self.c2),
            lambdas: self.lambdas.iter().map(f).collect(),
            ideals: self.ideals.clone(),
            c_il: self.c_il.iter().map(|(a, b)| (f(a), f(b))).collect(),
            iso: [iso(&self.iso[0]), iso(&self.iso[1])],
            swapped: self.swapped,
            alignment_residual: self.alignment_residual,
            assumption: self.assumption.clone(),
        }
    }

    pub fn to_f64(&self) -> AlgebraicConstants<f64> {
        self.map_scalar(|x| x.to_f64())
    }
}

/// Verifies alignment, swaps factors so that `c₁ ≤ 2`, and computes the
/// isotropy Casimirs and the assumption report.
pub fn analyze<S: Scalar>(emb: Embedding<S>, tol: f64) -> Result<(Embedding<S>, AlgebraicConstants<S>)> {
    let mut emb = emb;
    let mut al = verify_alignment(&emb, tol)?;
    if al.c1 > S::from_i64(2) {
        emb = emb.swap();
        al = verify_alignment(&emb, tol)?;
    }
    let i1 = isotropy(&emb, 1, tol)?;
    let i2 = isotropy(&emb, 2, tol)?;
    let ef = emb.to_f64();
    let f1 = isotropy_to_f64(&i1);
    let f2 = isotropy_to_f64(&i2);
    let assumption = check_assumption(&ef, [&f1, &f2]);
    let consts = AlgebraicConstants {
        name: emb.name.clone(),
        dims: [i1.p_basis.len(), i2.p_basis.len(), emb.k.dim],
        c1: al.c1,
        c2: al.c2,
        lambdas: al.lambdas,
        ideals: al.ideals,
        c_il: al.c_il,
        iso: [i1, i2],
        swapped: emb.swapped,
        alignment_residual: al.residual,
        assumption,
    };
    Ok((emb, consts))
}

fn isotropy_to_f64<S: Scalar>(i: &Isotropy<S>) -> Isotropy<f64> {
    Isotropy {
        p_basis: i.p_basis.iter().map(|v| v.iter().map(|x| x.to_f64()).collect()).collect(),
        rep: i.rep.iter().map(|m| m.to_f64()).collect(),
        cas: i.cas.to_f64(),
        kappa: i.kappa.as_ref().map(|x| x.to_f64()),
    }
}

/// `z₁`-dependent constants under the standard normalization
/// `z₂ = 1/(c₁-1)`, `y₁ = 1`, `y₂ = -1/(c₁-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZConstants<S> {
    pub z1: S,
    pub z2: S,
    pub y1: S,
    pub y2: S,
    pub a3: S,
    pub b3: S,
    pub c3: S,
    pub b4: S,
}

pub fn z_constants<S: Scalar>(c1: &S, z1: &S) -> Result<ZConstants<S>> {
    if !z1.is_positive() {
        return Err(BrfError::Parameter("z1 must be positive".into()));
    }
    if !(c1.clone() > S::one()) {
        return Err(BrfError::Parameter("c1 must exceed 1".into()));
    }
    let one = S::one();
    let c2 = c1.clone() / (c1.clone() - one.clone());
    let z2 = (c1.clone() - one.clone()).recip();
    let y1 = one.clone();
    let y2 = -z2.clone();
    let a3 = -(c2.clone() * z1.clone()) / (c1.clone() * z2.clone());
    let b3 = z1.clone() / c1.clone() + a3.clone() * a3.clone() * z2.clone() / c2.clone();
    let c3 = y1.clone() / c1.clone() + a3.clone() * y2.clone() / c2.clone();
    let b4 = z1.clone() / c1.clone() + z2.clone() / c2;
    Ok(ZConstants { z1: z1.clone(), z2, y1, y2, a3, b3, c3, b4 })
}

/// Which summand a frame index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    P1,
    P2,
    /// `p₃^l` for ideal `l`.
    P3(usize),
    K,
}

/// Float model of `G₁×G₂/K` at a fixed `z₁` with a `g_b`-orthonormal
/// adapted frame `{e¹}, {e²}, {e³} (per ideal), {e⁴}`.
#[derive(Clone, Debug)]
pub struct AlignedSpace {
    pub emb: Embedding<f64>,
    pub consts: AlgebraicConstants<f64>,
    pub z: ZConstants<f64>,
    pub total: LieAlgebra<f64>,
    /// Frame vectors in coordinates of `g₁⊕g₂`.
    pub frame_vectors: Vec<Vec<f64>>,
    pub kinds: Vec<BlockKind>,
    pub frame: ReductiveFrame,
    /// `Q₀` on the frame, including `k`.
    pub q_frame: Mat<f64>,
    /// `cas_{χ_i}` in the orthonormal frame of `p_i`.
    pub cas_frame: [Mat<f64>; 2],
}

impl AlignedSpace {
    pub fn build<S: Scalar>(emb: &Embedding<S>, consts: &AlgebraicConstants<S>, z1: f64) -> Result<Self> {
        let emb = emb.to_f64();
        let consts = consts.to_f64();
        let z = z_constants(&consts.c1, &z1)?;
        let total = emb.total();
        let (n1, n2, nk) = (emb.g1.dim, emb.g2.dim, emb.k.dim);
        let n = n1 + n2;
        let b1 = emb.g1.killing.clone();
        let b2 = emb.g2.killing.clone();
        let gb = Mat::from_fn(n, n, |i, j| {
            if i < n1 && j < n1 {
                -z.z1 * b1.get(i, j)
            } else if i >= n1 && j >= n1 {
                -z.z2 * b2.get(i - n1, j - n1)
            } else {
                0.0
            }
        });
        let q = Mat::from_fn(n, n, |i, j| {
            if i < n1 && j < n1 {
                z.y1 * b1.get(i, j)
            } else if i >= n1 && j >= n1 {
                z.y2 * b2.get(i - n1, j - n1)
            } else {
                0.0
            }
        });
        let mut vectors = Vec::with_capacity(n);
        let mut kinds = Vec::with_capacity(n);
        let pad = |v: &[f64], first: bool| -> Vec<f64> {
            let mut out = vec![0.0; n];
            let off = if first { 0 } else { n1 };
            out[off..off + v.len()].copy_from_slice(v);
            out
        };
        let p1 = orthonormal_basis(&consts.iso[0].p_basis, &b1.scale(&-z.z1))?;
        vectors.extend(p1.iter().map(|v| pad(v, true)));
        kinds.extend(std::iter::repeat(BlockKind::P1).take(p1.len()));
        let p2 = orthonormal_basis(&consts.iso[1].p_basis, &b2.scale(&-z.z2))?;
        vectors.extend(p2.iter().map(|v| pad(v, false)));
        kinds.extend(std::iter::repeat(BlockKind::P2).take(p2.len()));
        // <,>-orthonormal basis of k adapted to the ideals
        let inner = emb.pulled_killing(1).add(&emb.pulled_killing(2)).scale(&-1.0);
        let mut zs: Vec<(usize, Vec<f64>)> = Vec::new();
        for (l, (r, _)) in consts.ideals.iter().enumerate() {
            let units: Vec<Vec<f64>> = r.clone().map(|i| crate::liealg::unit(nk, i)).collect();
            for v in orthonormal_basis(&units, &inner)? {
                zs.push((l, v));
            }
        }
        for a in 0..zs.len() {
            for b in a + 1..zs.len() {
                let ip = crate::linalg::bilinear(&inner, &zs[a].1, &zs[b].1);
                if ip.abs() > 1e-10 {
                    return Err(BrfError::UnsupportedSpace("ideals of k are not mutually orthogonal".into()));
                }
            }
        }
        let s3 = z.b3.sqrt();
        let s4 = z.b4.sqrt();
        let embed = |zv: &[f64], t2: f64, s: f64| -> Vec<f64> {
            let a = emb.iota1.apply(zv);
            let b = emb.iota2.apply(zv);
            a.iter().map(|x| x / s).chain(b.iter().map(|x| t2 * x / s)).collect()
        };
        for (l, zv) in &zs {
            vectors.push(embed(zv, z.a3, s3));
            kinds.push(BlockKind::P3(*l));
        }
        for (_, zv) in &zs {
            vectors.push(embed(zv, 1.0, s4));
            kinds.push(BlockKind::K);
        }
        let np = n - nk;
        let frame = ReductiveFrame::new(&total, &vectors, np, &gb)?;
        let f = Mat::from_cols(&vectors);
        let q_frame = f.transpose().mul(&q).mul(&f);
        let mut space = AlignedSpace {
            emb,
            consts,
            z,
            total,
            frame_vectors: vectors,
            kinds,
            frame,
            q_frame,
            cas_frame: [Mat::zeros(0, 0), Mat::zeros(0, 0)],
        };
        space.cas_frame = [space.frame_casimir(BlockKind::P1), space.frame_casimir(BlockKind::P2)];
        Ok(space)
    }

    pub fn z1(&self) -> f64 {
        self.z.z1
    }

    pub fn np(&self) -> usize {
        self.frame.np
    }

    pub fn block_range(&self, kind: BlockKind) -> Range<usize> {
        let start = self.kinds.iter().position(|k| *k == kind).unwrap_or(0);
        let len = self.kinds.iter().filter(|k| **k == kind).count();
        start..start + len
    }

    /// Ranges of the p₃ blocks, one per ideal.
    pub fn p3_ranges(&self) -> Vec<Range<usize>> {
        (0..self.consts.ideals.len()).map(|l| self.block_range(BlockKind::P3(l))).collect()
    }

    pub fn k_range(&self) -> Range<usize> {
        self.block_range(BlockKind::K)
    }

    /// `c_i · (-Σ ad(Z^α_i)²)` on `p_i` from the frame brackets.
    fn frame_casimir(&self, kind: BlockKind) -> Mat<f64> {
        let r = self.block_range(kind);
        let ci = if kind == BlockKind::P1 { self.consts.c1 } else { self.consts.c2 };
        let d = r.len();
        let mut cas = Mat::zeros(d, d);
        for m in self.k_range() {
            // ad(e⁴_m) restricted to p_i; e⁴ = Z/√B₄
            let a = Mat::from_fn(d, d, |i, j| self.frame.c(m, r.start + j, r.start + i));
            cas = cas.sub(&a.mul(&a));
        }
        cas.scale(&(ci * self.z.b4))
    }

    /// Weights `x_k` of a diagonal metric on the p-frame.
    pub fn weights(&self, x: [f64; 3]) -> Vec<f64> {
        self.kinds[..self.np()]
            .iter()
            .map(|k| match k {
                BlockKind::P1 => x[0],
                BlockKind::P2 => x[1],
                _ => x[2],
            })
            .collect()
    }

    /// `Q₀` as a matrix on the total algebra coordinates.
    pub fn q_total(&self) -> Mat<f64> {
        let f = Mat::from_cols(&self.frame_vectors);
        let finv = f.inverse(1e-14).expect("frame is a basis");
        finv.transpose().mul(&self.q_frame).mul(&finv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn normalized_constants() {
        let c1 = q(11, 6);
        for z1 in [q(1, 3), q(5, 6), q(2, 1)] {
            let z = z_constants(&c1, &z1).unwrap();
            assert_eq!(z.a3, -z1.clone());
            assert_eq!(z.b3, z1.clone() * (z1.clone() + q(1, 1)) / c1.clone());
            assert_eq!(z.b4, (z1.clone() + q(1, 1)) / c1.clone());
            assert_eq!(z.c3, z.b4);
        }
        assert!(matches!(z_constants(&c1, &q(0, 1)), Err(BrfError::Parameter(_))));
    }

    #[test]
    fn s1_pq_alignment() {
        for (p, qq) in [(1, 1), (2, 1), (1, 2), (3, 2)] {
            let emb = s1_pq::<Q>(p, qq).unwrap();
            let al = verify_alignment(&emb, 0.0).unwrap();
            assert_eq!(al.c1, q(p * p + qq * qq, p * p));
            assert_eq!(al.c1.recip() + al.c2.recip(), q(1, 1));
        }
    }

    #[test]
    fn s1_pq_swaps_when_needed() {
        let (emb, c) = analyze(s1_pq::<Q>(1, 2).unwrap(), 0.0).unwrap();
        assert!(emb.swapped && c.swapped);
        assert_eq!(c.c1, q(5, 4));
        assert_eq!(c.dims, [2, 2, 1]);
    }

    #[test]
    fn non_injective_projection_rejected() {
        let su2 = crate::liealg::build_su::<Q>(2);
        let k = LieAlgebra::from_upper_brackets("t2", vec!["a".into(), "b".into()], |_, _| Vec::new(), vec![]);
        let h = |x: i64| vec![q(0, 1), q(0, 1), q(x, 1)];
        let emb = Embedding::new("bad", su2.clone(), su2, k, vec![h(1), h(1)], vec![h(1), h(2)], 0..2, vec![], 0.0);
        assert!(matches!(emb, Err(BrfError::Misuse(_))));
    }
}
