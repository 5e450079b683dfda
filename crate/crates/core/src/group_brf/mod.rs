//! Left-invariant diagonal metrics on a compact Lie group with torsion the
//! Cartan form `H_b = g_b([·,·],·)`.

use crate::curvature::{ReductiveFrame, ThreeForm};
use crate::error::{BrfError, Result};
use crate::liealg::{build_classical, build_g2, direct_sum, orthonormal_basis, unit, ClassicalFamily, LieAlgebra};
use crate::linalg::Mat;
use crate::scalar::{round_f64, Dual, Scalar};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::ops::Range;

/// `g_b = ⊕ z_i(−B_i)` over the simple ideals, with a `g_b`-orthonormal
/// frame adapted to them.
#[derive(Clone, Debug)]
pub struct GroupFrame {
    pub algebra: LieAlgebra<f64>,
    pub ideals: Vec<Range<usize>>,
    pub gb_scale: Vec<f64>,
    pub frame: ReductiveFrame,
    pub abelian: bool,
}

/// Diagonal metric `(x₁,…,x_n)_{g_b}` on a [`GroupFrame`].
#[derive(Clone, Debug)]
pub struct GroupMetric<'a> {
    pub base: &'a GroupFrame,
    pub x: Vec<f64>,
}

impl GroupFrame {
    pub fn new(algebra: LieAlgebra<f64>, gb_scale: Option<Vec<f64>>) -> Result<Self> {
        let n = algebra.dim;
        let abelian = algebra.is_abelian();
        let ideals = if abelian {
            vec![0..n]
        } else if algebra.simple_blocks.is_empty() {
            vec![0..n]
        } else {
            algebra.simple_blocks.clone()
        };
        let scales = gb_scale.unwrap_or_else(|| vec![1.0; ideals.len()]);
        if scales.len() != ideals.len() || scales.iter().any(|z| !(*z > 0.0)) {
            return Err(BrfError::Parameter(format!("need {} positive g_b scales", ideals.len())));
        }
        if !abelian && !algebra.is_compact_semisimple(1e-10) {
            return Err(BrfError::Parameter(format!("{} is not compact semisimple", algebra.name)));
        }
        let mut gb = Mat::zeros(n, n);
        for (r, z) in ideals.iter().zip(&scales) {
            for i in r.clone() {
                for j in r.clone() {
                    let v = if abelian { if i == j { *z } else { 0.0 } } else { -z * algebra.killing.get(i, j) };
                    gb.set(i, j, v);
                }
            }
        }
        let mut vectors = Vec::with_capacity(n);
        for r in &ideals {
            let units: Vec<Vec<f64>> = r.clone().map(|i| unit(n, i)).collect();
            vectors.extend(orthonormal_basis(&units, &gb)?);
        }
        let frame = ReductiveFrame::new(&algebra, &vectors, n, &gb)?;
        Ok(GroupFrame { algebra, ideals, gb_scale: scales, frame, abelian })
    }

    pub fn dim(&self) -> usize {
        self.frame.n
    }

    pub fn metric(&self, x: Vec<f64>) -> Result<GroupMetric<'_>> {
        if x.len() != self.dim() || x.iter().any(|v| !(*v > 0.0)) {
            return Err(BrfError::Parameter(format!("need {} positive metric entries", self.dim())));
        }
        Ok(GroupMetric { base: self, x })
    }

    /// `Σ_{i,j} c_{ij}^k c_{ij}^l`, which equals `−B` on the frame.
    pub fn cc_sum(&self) -> Mat<f64> {
        let n = self.dim();
        Mat::from_fn(n, n, |k, l| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.frame.c(i, j, k) * self.frame.c(i, j, l);
                }
            }
            s
        })
    }

    pub fn cartan_form(&self) -> ThreeForm {
        self.frame.cartan_form()
    }

    /// Per-ideal rescaled Cartan form `Σ y_i/z_i · H_b|_{g_i}`.
    pub fn ideal_cartan_form(&self, y: &[f64]) -> ThreeForm {
        let mut h = self.cartan_form();
        let np = h.np;
        for (r, (yi, zi)) in self.ideals.iter().zip(y.iter().zip(&self.gb_scale)) {
            for a in r.clone() {
                for b in 0..np {
                    for c in 0..np {
                        h.data[(a * np + b) * np + c] *= yi / zi;
                    }
                }
            }
        }
        h
    }
}

impl GroupMetric<'_> {
    /// `(H_b)²_g(e_k,e_l) = Σ c_{ij}^k c_{ij}^l/(x_i x_j)`.
    pub fn hb_squared(&self) -> Mat<f64> {
        self.base.frame.h_squared(&self.base.cartan_form(), &self.x)
    }

    /// `−½B(e_k,e_l) − ¼Σ c_{ij}^k c_{ij}^l (x_i²+x_j²−x_k x_l)/(x_i x_j)`.
    pub fn ricci_group(&self) -> Mat<f64> {
        let f = &self.base.frame;
        let n = self.x.len();
        let x = &self.x;
        Mat::from_fn(n, n, |k, l| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let cc = f.c(i, j, k) * f.c(i, j, l);
                    if cc != 0.0 {
                        s += cc * (x[i] * x[i] + x[j] * x[j] - x[k] * x[l]) / (x[i] * x[j]);
                    }
                }
            }
            -0.5 * f.killing.get(k, l) - 0.25 * s
        })
    }

    pub fn ricci_bruteforce(&self) -> Mat<f64> {
        self.base.frame.ricci(&self.x)
    }

    pub fn brf_group_equations(&self) -> Mat<f64> {
        equations_generic(&self.base.frame, &self.x, |v| v)
    }

    /// `δ_g H_b` in `g`-orthonormal components.
    pub fn cartan_codifferential(&self) -> Mat<f64> {
        crate::curvature::to_g_orthonormal(&self.base.frame.codifferential(&self.base.cartan_form(), &self.x), &self.x)
    }
}

fn equations_generic<S: Scalar>(f: &ReductiveFrame, x: &[S], lift: impl Fn(f64) -> S) -> Mat<S> {
    let n = x.len();
    Mat::from_fn(n, n, |k, l| {
        let mut s = S::zero();
        for i in 0..n {
            for j in 0..n {
                let cc = f.c(i, j, k) * f.c(i, j, l);
                if cc != 0.0 {
                    let d = x[i].clone() - x[j].clone();
                    let num = d.clone() * d - x[k].clone() * x[l].clone() + S::one();
                    s = s + lift(cc) * num / (x[i].clone() * x[j].clone());
                }
            }
        }
        s
    })
}

/// Diagonal entries in the rewritten form
/// `Σ c_{ij}^k² ((x_i−x_j)² − x_k² + 1)/(x_i x_j)`.
pub fn diagonal_equations(g: &GroupMetric<'_>) -> Vec<f64> {
    let f = &g.base.frame;
    let x = &g.x;
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let c = f.c(i, j, k);
                    s += c * c * ((x[i] - x[j]).powi(2) - x[k] * x[k] + 1.0) / (x[i] * x[j]);
                }
            }
            s
        })
        .collect()
}

/// `max |Ric(g_b) − ¼H²|` for the bi-invariant metric and `H = Σ y_i H_i`
/// with `H_i = (−B_i)([·,·],·)`.
pub fn bi_invariant_residual(gf: &GroupFrame, y: &[f64]) -> f64 {
    let w = vec![1.0; gf.dim()];
    let ric = gf.frame.ricci(&w);
    let h2 = gf.frame.h_squared(&gf.ideal_cartan_form(y), &w);
    ric.sub(&h2.scale(&0.25)).max_abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct HullCheck {
    pub x_min: f64,
    pub x_max: f64,
    /// `(x_min − x_max)² − (x_max² − 1)`, nonnegative at solutions.
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub algebra: String,
    pub trials: usize,
    pub converged: usize,
    pub solutions_found: usize,
    pub solutions: Vec<Vec<f64>>,
    pub max_residual: f64,
    pub hull_checks: Vec<HullCheck>,
    pub degenerate: bool,
    pub critical: bool,
}

impl RigidityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra,
            "trials": self.trials,
            "converged": self.converged,
            "solutions_found": self.solutions_found,
            "solutions": self.solutions.iter().map(|s| s.iter().map(|v| round_f64(*v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "max_residual": round_f64(self.max_residual),
            "hull_checks": self.hull_checks.iter().map(|h| json!({
                "x_min": round_f64(h.x_min), "x_max": round_f64(h.x_max), "slack": round_f64(h.slack)
            })).collect::<Vec<_>>(),
            "degenerate": self.degenerate,
            "critical": self.critical,
        })
    }
}

/// Equations times `|x|²/n`, which keeps the blow-up `x_max → ∞` (where the
/// raw equations decay like `x_max⁻²`) away from zero.
fn weighted<S: Scalar>(f: &ReductiveFrame, x: &[S], lift: impl Fn(f64) -> S) -> Vec<S> {
    let n = x.len();
    let w = x.iter().fold(S::zero(), |a, v| a + v.clone() * v.clone()) / S::from_i64(n as i64);
    equations_generic(f, x, lift).data.into_iter().map(|e| e * w.clone()).collect()
}

fn weighted_max(f: &ReductiveFrame, x: &[f64]) -> f64 {
    weighted(f, x, |v| v).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Weighted residual and its Jacobian in `u = log x`.
fn residual_and_jacobian(f: &ReductiveFrame, u: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let n = u.len();
    let mut r = DVector::zeros(0);
    let mut jac = DMatrix::zeros(n * n, n);
    for v in 0..n {
        let xd: Vec<Dual<f64>> = (0..n).map(|i| { let e = u[i].exp(); Dual::new(e, if i == v { e } else { 0.0 }) }).collect();
        let e = weighted(f, &xd, Dual::constant);
        r = DVector::from_iterator(n * n, e.iter().map(|d| d.v));
        for (row, d) in e.iter().enumerate() {
            jac[(row, v)] = d.d;
        }
    }
    (r, jac)
}

/// Multistart Levenberg-Marquardt in `log x` on the group equations from
/// log-uniform starts in `[0.05, 20]ⁿ`.
pub fn verify_rigidity(gf: &GroupFrame, trials: usize, seed: u64) -> Result<RigidityReport> {
    let n = gf.dim();
    let name = gf.algebra.name.clone();
    if gf.abelian {
        return Ok(RigidityReport {
            algebra: name,
            trials,
            converged: trials,
            solutions_found: 0,
            solutions: Vec::new(),
            max_residual: 0.0,
            hull_checks: Vec::new(),
            degenerate: true,
            critical: false,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    let mut sols: Vec<Vec<f64>> = Vec::new();
    let mut converged = 0;
    let mut max_residual = 0.0f64;
    for _ in 0..trials {
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        let mut mu = 1e-3;
        for _ in 0..500 {
            let (r, ju) = residual_and_jacobian(&gf.frame, &u);
            let norm = r.norm();
            if r.amax() < 1e-13 {
                break;
            }
            let jt = ju.transpose();
            let jtj = &jt * &ju;
            let g = &jt * &r;
            let mut moved = false;
            for _ in 0..30 {
                let a = &jtj + DMatrix::from_diagonal(&jtj.diagonal().map(|d| mu * (d + 1e-12)));
                let Some(step) = a.lu().solve(&(-&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let cand: Vec<f64> = (0..n).map(|i| u[i] + step[i].clamp(-2.0, 2.0)).collect();
                let nc = if cand.iter().all(|v| v.abs() < 30.0) {
                    let xc: Vec<f64> = cand.iter().map(|v| v.exp()).collect();
                    DVector::from_vec(weighted(&gf.frame, &xc, |v| v)).norm()
                } else {
                    f64::INFINITY
                };
                if nc < norm {
                    u = cand;
                    mu = (mu * 0.3).max(1e-15);
                    moved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !moved {
                break;
            }
        }
        let x: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        let res = weighted_max(&gf.frame, &x);
        if res < 1e-10 {
            converged += 1;
            max_residual = max_residual.max(res);
            let dup = sols.iter().any(|s| s.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-6 * b.abs().max(1.0)));
            if !dup {
                sols.push(x);
            }
        }
    }
    sols.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let hull_checks: Vec<HullCheck> = sols
        .iter()
        .map(|s| {
            let x_min = s.iter().cloned().fold(f64::INFINITY, f64::min);
            let x_max = s.iter().cloned().fold(0.0, f64::max);
            HullCheck { x_min, x_max, slack: (x_min - x_max).powi(2) - (x_max * x_max - 1.0) }
        })
        .collect();
    let critical = sols.iter().any(|s| s.iter().any(|v| (v - 1.0).abs() > 1e-6));
    Ok(RigidityReport {
        algebra: name,
        trials,
        converged,
        solutions_found: sols.len(),
        solutions: sols,
        max_residual,
        hull_checks,
        degenerate: false,
        critical,
    })
}

/// Parses `su2`, `so5`, `sp2`, `g2`, `abelian3` and sums like `su2+su2`.
pub fn parse_algebra(spec: &str) -> Result<LieAlgebra<f64>> {
    let mut acc: Option<LieAlgebra<f64>> = None;
    for part in spec.split('+') {
        let part = part.trim().to_ascii_lowercase();
        let alg: LieAlgebra<f64> = if part == "g2" {
            build_g2::<crate::scalar::Q>()?.to_f64()
        } else if let Some(n) = part.strip_prefix("abelian") {
            let n: usize = n.parse().map_err(|_| BrfError::Parameter(format!("bad algebra `{part}`")))?;
            let labels = (0..n).map(|i| format!("t{i}")).collect();
            LieAlgebra::from_upper_brackets(part.clone(), labels, |_, _| Vec::new(), vec![])
        } else {
            let split = part.find(|c: char| c.is_ascii_digit()).ok_or_else(|| BrfError::Parameter(format!("bad algebra `{part}`")))?;
            let fam: ClassicalFamily = part[..split].parse()?;
            let n: usize = part[split..].parse().map_err(|_| BrfError::Parameter(format!("bad algebra `{part}`")))?;
            build_classical::<crate::scalar::Q>(fam, n)?.to_f64()
        };
        acc = Some(match acc {
            None => alg,
            Some(a) => direct_sum(&a, &alg),
        });
    }
    acc.ok_or_else(|| BrfError::Parameter("empty algebra".into()))
}
