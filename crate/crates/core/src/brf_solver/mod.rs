//! Solving the Bismut-Ricci-flat equations on the diagonal family
//! `g = (x₁, x₂, x₃)_{g_b}` with torsion `H_Q`.

mod legacy;

pub use legacy::*;

use crate::aligned::{AlgebraicConstants, AlignedSpace, Isotropy};
use crate::curvature::{brf_blocks, brf_residual_parts, hq_form, ricci_operator_closed, DiagonalMetric, H2Mode};
use crate::error::{BrfError, Result};
use crate::linalg::{to_dmatrix, Mat};
use crate::scalar::{approx_rational, Dual, Scalar};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

/// Everything the closed-form equations need about a space.
#[derive(Clone, Debug)]
pub struct SpaceParams<S> {
    pub name: String,
    pub c1: S,
    /// One entry per ideal of `k`: `(λ_l, dim k_l)`.
    pub lambdas: Vec<(S, usize)>,
    /// Distinct eigenvalues of `cas_{χ_i}` with multiplicities.
    pub kappas: [Vec<(S, usize)>; 2],
}

impl<S: Scalar> SpaceParams<S> {
    pub fn from_constants(c: &AlgebraicConstants<S>) -> Result<Self> {
        let kappas = [casimir_spectrum(&c.iso[0])?, casimir_spectrum(&c.iso[1])?];
        let lambdas = c.lambdas.iter().cloned().zip(c.ideal_dims()).collect();
        Ok(SpaceParams { name: c.name.clone(), c1: c.c1.clone(), lambdas, kappas })
    }

    pub fn c2(&self) -> S {
        self.c1.clone() / (self.c1.clone() - S::one())
    }

    pub fn lambda_values(&self) -> Vec<S> {
        self.lambdas.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn to_f64(&self) -> SpaceParams<f64> {
        let f = |v: &Vec<(S, usize)>| v.iter().map(|(a, m)| (a.to_f64(), *m)).collect();
        SpaceParams {
            name: self.name.clone(),
            c1: self.c1.to_f64(),
            lambdas: f(&self.lambdas),
            kappas: [f(&self.kappas[0]), f(&self.kappas[1])],
        }
    }
}

/// Distinct eigenvalues of the isotropy Casimir. In exact mode candidates
/// are rationalized and confirmed by exact rank computations.
pub fn casimir_spectrum<S: Scalar>(iso: &Isotropy<S>) -> Result<Vec<(S, usize)>> {
    let d = iso.cas.rows;
    if d == 0 {
        return Ok(Vec::new());
    }
    if let Some(k) = &iso.kappa {
        return Ok(vec![(k.clone(), d)]);
    }
    let mut ev: Vec<f64> = to_dmatrix(&iso.cas.to_f64()).complex_eigenvalues().iter().map(|c| c.re).collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for e in ev {
        match clusters.last_mut() {
            Some((v, m)) if (e - *v / *m as f64).abs() < 1e-7 => {
                *v += e;
                *m += 1;
            }
            _ => clusters.push((e, 1)),
        }
    }
    let mut out = Vec::new();
    for (sum, m) in clusters {
        let mean = sum / m as f64;
        let val = if S::EXACT {
            let (n, den) = approx_rational(mean, 1_000_000);
            let k = S::from_ratio(n, den);
            let shifted = Mat::from_fn(d, d, |i, j| {
                let v = iso.cas.get(i, j).clone();
                if i == j {
                    v - k.clone()
                } else {
                    v
                }
            });
            if shifted.rank(0.0) != d - m {
                return Err(BrfError::Numerical(format!("Casimir eigenvalue {mean} is not a small rational")));
            }
            k
        } else {
            S::from_json(&json!(mean)).unwrap_or_else(S::zero)
        };
        out.push((val, m));
    }
    Ok(out)
}

/// `g₀(z₁) = (1/z₁, 1, (z₁+1)/z₁)_{g_b}`.
pub fn canonical_metric<S: Scalar>(z1: &S) -> Result<DiagonalMetric<S>> {
    DiagonalMetric::new(z1.clone(), [z1.recip(), S::one(), (z1.clone() + S::one()) / z1.clone()])
}

/// Coordinates `(y₁, y₂, y₃)` of the same metric with respect to `g_K`.
///
/// `p₁`, `p₂` are shared by both decompositions. A vector `(ι₁Z, A₃ι₂Z)` of
/// `p₃` is congruent modulo `k` to `(1-t)(ι₁Z, A₃ᴷι₂Z)` with
/// `1-t = (1-A₃)/(1-A₃ᴷ)`, which fixes `y₃`.
pub fn gk_coordinates<S: Scalar>(c1: &S, m: &DiagonalMetric<S>) -> Result<[S; 3]> {
    let z = crate::aligned::z_constants(c1, &m.z1)?;
    let one = S::one();
    let c2 = c1.clone() / (c1.clone() - one.clone());
    let a3k = -(c1.clone() - one.clone()).recip();
    let b3k = c1.recip() + a3k.clone() * a3k.clone() / c2;
    let s = (one.clone() - z.a3) / (one - a3k);
    let [x1, x2, x3] = m.x.clone();
    Ok([x1 * z.z1, x2 / (c1.clone() - S::one()), x3 * z.b3 / (s.clone() * s * b3k)])
}

/// Closed-form equations `x_k·Ric − ¼H²`, one per isotypic component.
pub fn equations<S: Scalar>(p: &SpaceParams<S>, m: &DiagonalMetric<S>, mode: H2Mode) -> Result<Vec<S>> {
    let b = brf_blocks(&p.c1, &p.lambda_values(), m, mode)?;
    let mut out: Vec<S> = p.kappas[0].iter().map(|(k, _)| b.p1.at(k)).collect();
    out.extend(p.kappas[1].iter().map(|(k, _)| b.p2.at(k)));
    out.extend(b.p3);
    Ok(out)
}

/// One factor `λ(z₁+1)²/x₃² + (1/c₁−λ)/x₁² + (1/c₂−λ)z₁²/x₂²` per ideal.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry<S> {
    pub lambda: S,
    pub coef_x1: S,
    pub coef_x2: S,
    pub value: S,
    pub positive: bool,
}

pub fn positivity_certificate<S: Scalar>(p: &SpaceParams<S>, m: &DiagonalMetric<S>) -> Vec<CertificateEntry<S>> {
    let c2 = p.c2();
    let z1 = &m.z1;
    let [x1, x2, x3] = m.x.clone();
    let zp = z1.clone() + S::one();
    p.lambdas
        .iter()
        .map(|(l, _)| {
            let coef_x1 = p.c1.recip() - l.clone();
            let coef_x2 = c2.recip() - l.clone();
            let value = l.clone() * zp.clone() * zp.clone() / (x3.clone() * x3.clone())
                + coef_x1.clone() / (x1.clone() * x1.clone())
                + coef_x2.clone() * z1.clone() * z1.clone() / (x2.clone() * x2.clone());
            let positive = !(l.clone() < S::zero()) && coef_x1.is_positive() && coef_x2.is_positive() && value.is_positive();
            CertificateEntry { lambda: l.clone(), coef_x1, coef_x2, value, positive }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct BrfSolution<S> {
    pub metric: DiagonalMetric<S>,
    pub gk: [S; 3],
    pub mode: H2Mode,
    /// Largest closed-form equation defect.
    pub equation_residual: f64,
    /// Direct-summation residual, when a space model was available.
    pub residual: Option<f64>,
    pub certificate: Vec<CertificateEntry<S>>,
}

impl<S: Scalar> BrfSolution<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "z1": self.metric.z1.to_json(),
            "x": self.metric.x.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "gk_coordinates": self.gk.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "mode": self.mode,
            "equation_residual": crate::scalar::round_f64(self.equation_residual),
            "residual": self.residual.map(crate::scalar::round_f64),
            "certificate": self.certificate.iter().map(|c| json!({
                "lambda": c.lambda.to_json(),
                "coef_x1": c.coef_x1.to_json(),
                "coef_x2": c.coef_x2.to_json(),
                "value": c.value.to_json(),
                "positive": c.positive,
            })).collect::<Vec<_>>(),
        })
    }
}

fn max_abs<S: Scalar>(v: &[S]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.to_f64().abs()))
}

pub fn canonical_solution<S: Scalar>(p: &SpaceParams<S>, z1: &S) -> Result<BrfSolution<S>> {
    let metric = canonical_metric(z1)?;
    let eq = equations(p, &metric, H2Mode::Corrected)?;
    Ok(BrfSolution {
        gk: gk_coordinates(&p.c1, &metric)?,
        certificate: positivity_certificate(p, &metric),
        equation_residual: max_abs(&eq),
        residual: None,
        mode: H2Mode::Corrected,
        metric,
    })
}

/// Corrected system: the positive second factor forces `x₃ = (z₁+1)/z₁`,
/// after which each isotypic equation on `p₁`, `p₂` pins `x₁`, `x₂`.
pub fn solve_corrected<S: Scalar>(p: &SpaceParams<S>, z1: &S) -> Result<Vec<BrfSolution<S>>> {
    if !z1.is_positive() {
        return Err(BrfError::Parameter("z1 must be positive".into()));
    }
    for (l, _) in &p.lambdas {
        let ok = !(l.clone() < S::zero()) && (p.c1.recip() - l.clone()).is_positive() && (p.c2().recip() - l.clone()).is_positive();
        if !ok {
            return Err(BrfError::InternalInconsistency(format!("c_i λ < 1 fails for λ = {}", l.to_f64())));
        }
    }
    let x3 = (z1.clone() + S::one()) / z1.clone();
    let pick = |kappas: &[(S, usize)], second: bool| -> Result<S> {
        let mut val: Option<S> = None;
        for (k, _) in kappas {
            let v = block_root(&x3, z1, k, second)?;
            if let Some(prev) = &val {
                if !(prev.clone() - v.clone()).is_negligible(1e-10) {
                    return Err(BrfError::InternalInconsistency("isotypic components give different roots".into()));
                }
            }
            val = Some(v);
        }
        Ok(val.unwrap_or_else(|| if second { S::one() } else { z1.recip() }))
    };
    let x1 = pick(&p.kappas[0], false)?;
    let x2 = pick(&p.kappas[1], true)?;
    let metric = DiagonalMetric::new(z1.clone(), [x1, x2, x3])?;
    let certificate = positivity_certificate(p, &metric);
    if certificate.iter().any(|c| !c.positive) {
        return Err(BrfError::InternalInconsistency("positivity certificate failed".into()));
    }
    let eq = equations(p, &metric, H2Mode::Corrected)?;
    Ok(vec![BrfSolution {
        gk: gk_coordinates(&p.c1, &metric)?,
        equation_residual: max_abs(&eq),
        residual: None,
        mode: H2Mode::Corrected,
        certificate,
        metric,
    }])
}

/// `max(‖4Ric − H²‖, ‖δH‖, ‖dH‖)` with `H = H_Q` of the space model.
pub fn brf_residual(space: &AlignedSpace, m: &DiagonalMetric<f64>) -> Result<f64> {
    Ok(brf_residual_parts(space, m, &hq_form(space))?.max())
}

/// Attaches direct-summation residuals computed on `space`.
pub fn with_bruteforce<S: Scalar>(space: &AlignedSpace, mut s: BrfSolution<S>) -> Result<BrfSolution<S>> {
    s.residual = Some(brf_residual(space, &s.metric.to_f64())?);
    Ok(s)
}

/// Sorted Ricci eigenvalue ratios (to the largest) with multiplicities.
pub fn homothety_invariants<S: Scalar>(p: &SpaceParams<S>, m: &DiagonalMetric<S>) -> Result<Vec<(f64, usize)>> {
    let r = ricci_operator_closed(&p.c1, &p.lambda_values(), m)?.to_f64();
    let pf = p.to_f64();
    let mut ev: Vec<(f64, usize)> = pf.kappas[0].iter().map(|(k, d)| (r.p1.at(k), *d)).collect();
    ev.extend(pf.kappas[1].iter().map(|(k, d)| (r.p2.at(k), *d)));
    ev.extend(r.p3.iter().zip(&pf.lambdas).map(|(v, (_, d))| (*v, *d)));
    let top = ev.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return Err(BrfError::Division("Ricci tensor vanishes".into()));
    }
    let mut out: Vec<(f64, usize)> = ev.into_iter().map(|(v, d)| (v / top, d)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (v, d) in out {
        match merged.last_mut() {
            Some((w, e)) if (v - *w).abs() < 1e-12 => *e += d,
            _ => merged.push((v, d)),
        }
    }
    Ok(merged)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultistartReport {
    pub starts: usize,
    pub converged: usize,
    pub solutions: Vec<[f64; 3]>,
    pub max_distance_to_canonical: f64,
    pub other_solutions: usize,
}

fn jacobian(p: &SpaceParams<f64>, z1: f64, x: [f64; 3], mode: H2Mode) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let pd = SpaceParams::<Dual<f64>> {
        name: p.name.clone(),
        c1: Dual::constant(p.c1),
        lambdas: p.lambdas.iter().map(|(l, d)| (Dual::constant(*l), *d)).collect(),
        kappas: [0, 1].map(|i| p.kappas[i].iter().map(|(k, d)| (Dual::constant(*k), *d)).collect()),
    };
    let mut f = Vec::new();
    let mut cols = Vec::new();
    for j in 0..3 {
        let xs = [0, 1, 2].map(|i| Dual::new(x[i], if i == j { 1.0 } else { 0.0 }));
        let eq = equations(&pd, &DiagonalMetric { z1: Dual::constant(z1), x: xs }, mode)?;
        f = eq.iter().map(|e| e.v).collect();
        cols.push(eq.iter().map(|e| e.d).collect::<Vec<_>>());
    }
    let j = DMatrix::from_fn(f.len(), 3, |r, c| cols[c][r]);
    Ok((f, j))
}

/// Damped Gauss-Newton from log-uniform starts in `[0.05, 20]³`.
pub fn multistart(p: &SpaceParams<f64>, z1: f64, starts: usize, seed: u64) -> Result<MultistartReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    let canon = canonical_metric(&z1)?.x;
    let mut sols: Vec<[f64; 3]> = Vec::new();
    let mut converged = 0;
    for _ in 0..starts {
        let mut x = [0; 3].map(|_| rng.gen_range(lo..hi).exp());
        let mut ok = false;
        for _ in 0..200 {
            let (f, j) = jacobian(p, z1, x, H2Mode::Corrected)?;
            let fv = DVector::from_vec(f);
            let norm = fv.amax();
            if norm < 1e-13 {
                ok = true;
                break;
            }
            let jt = j.transpose();
            let Some(step) = (&jt * &j + DMatrix::identity(3, 3) * 1e-14).lu().solve(&(-(&jt * &fv))) else {
                break;
            };
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let cand = [0, 1, 2].map(|i| x[i] + t * step[i]);
                if cand.iter().all(|v| *v > 0.0 && *v < 1e6) {
                    let fc = equations(p, &DiagonalMetric { z1, x: cand }, H2Mode::Corrected)?;
                    if max_abs(&fc) < norm {
                        x = cand;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if !ok {
            let f = equations(p, &DiagonalMetric { z1, x }, H2Mode::Corrected)?;
            ok = max_abs(&f) < 1e-11;
        }
        if ok {
            converged += 1;
            let dup = sols.iter().any(|s| rel_dist(s, &x) < 1e-6);
            if !dup {
                sols.push(x);
            }
        }
    }
    sols.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let dists: Vec<f64> = sols.iter().map(|s| rel_dist(s, &canon)).collect();
    Ok(MultistartReport {
        starts,
        converged,
        max_distance_to_canonical: dists.iter().cloned().fold(0.0, f64::max),
        other_solutions: dists.iter().filter(|d| **d > 1e-6).count(),
        solutions: sols,
    })
}

fn rel_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| ((a[i] - b[i]) / b[i].abs().max(1e-300)).abs()).fold(0.0, f64::max)
}

/// `BrfReport` JSON for a `z₁` grid.
pub fn brf_report<S: Scalar>(space_id: &str, grid: &[S], sols: &[BrfSolution<S>]) -> Value {
    json!({
        "space_id": space_id,
        "z1_grid": grid.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "mode": H2Mode::Corrected,
        "exact": S::EXACT,
        "reductive_decomposition": "g_b-orthogonal; g_K coordinates via the g_K-orthogonal complement of k",
        "solutions": sols.iter().map(BrfSolution::to_json).collect::<Vec<_>>(),
        "residuals": sols.iter().map(|s| crate::scalar::round_f64(s.residual.unwrap_or(s.equation_residual))).collect::<Vec<_>>(),
        "certificates": sols.iter().map(|s| s.certificate.iter().all(|c| c.positive)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligned::{analyze, builtin_embedding};
    use crate::scalar::{q, Q};

    fn params(id: &str) -> SpaceParams<Q> {
        let (_, c) = analyze(builtin_embedding::<Q>(id).unwrap(), 0.0).unwrap();
        SpaceParams::from_constants(&c).unwrap()
    }

    #[test]
    fn canonical_is_exact_solution() {
        let p = params("su3xsu3_so3");
        for z1 in [q(1, 2), q(1, 1), q(2, 1)] {
            let s = canonical_solution(&p, &z1).unwrap();
            assert_eq!(s.equation_residual, 0.0);
            assert_eq!(s.gk, [q(1, 1), q(1, 1), q(2, 1)]);
        }
    }

    #[test]
    fn corrected_solve_returns_canonical() {
        let p = params("so8xso7_g2");
        let z1 = q(3, 7);
        let s = solve_corrected(&p, &z1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].metric, canonical_metric(&z1).unwrap());
        assert!(s[0].certificate.iter().all(|c| c.positive));
    }

    #[test]
    fn nonscalar_casimir_spectrum_is_exact() {
        let p = params("su2xsu3_s1");
        let total: usize = p.kappas[0].iter().map(|(_, m)| m).sum();
        assert_eq!(total, 7);
        assert!(p.kappas[0].len() > 1);
        let s = solve_corrected(&p, &q(1, 1)).unwrap();
        assert_eq!(s[0].equation_residual, 0.0);
    }

    #[test]
    fn s1_space_gk_is_homothetic_to_known_triple() {
        let (_, c) = analyze(crate::aligned::s1_pq::<Q>(1, 2).unwrap(), 0.0).unwrap();
        let p = SpaceParams::from_constants(&c).unwrap();
        let g = canonical_solution(&p, &q(1, 1)).unwrap().gk;
        let (pp, qq) = (q(1, 1), q(2, 1));
        let s = pp.clone() * pp.clone() + qq.clone() * qq.clone();
        let mut target = [qq.clone() * qq.clone() / s.clone(), pp.clone() * pp / s, q(1, 1)];
        if c.swapped {
            target.swap(0, 1);
        }
        let ratio = g[0].clone() / target[0].clone();
        for i in 0..3 {
            assert_eq!(g[i].clone(), ratio.clone() * target[i].clone());
        }
    }

    #[test]
    fn multistart_finds_only_canonical() {
        let p = params("su3xsu3_so3").to_f64();
        let r = multistart(&p, 1.0, 10, 7).unwrap();
        assert_eq!(r.other_solutions, 0);
        assert!(r.converged > 0);
    }
}
