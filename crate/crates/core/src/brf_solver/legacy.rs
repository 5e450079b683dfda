//! The superseded third equation, its implicit solution curve `x₃(z₁)` and
//! derived quantities, kept to reproduce the original numbers and to show
//! where they break.

use super::{canonical_solution, gk_coordinates, SpaceParams};
use crate::aligned::{AlgebraicConstants, AlignedSpace, Embedding};
use crate::curvature::{h_squared_closed, DiagonalMetric, H2Mode};
use crate::error::{BrfError, Result};
use crate::scalar::{approx_rational, round_f64, Dual, Scalar};
use serde_json::{json, Value};

/// Hypotheses of the legacy system: scalar Casimirs and a single `λ`.
#[derive(Clone, Debug)]
pub struct LegacyParams<S> {
    pub c1: S,
    pub lambda: S,
    pub kappa1: S,
    pub kappa2: S,
}

impl<S: Scalar> LegacyParams<S> {
    pub fn from_space(p: &SpaceParams<S>) -> Result<Self> {
        let scalar = |v: &Vec<(S, usize)>, i: usize| -> Result<S> {
            match v.as_slice() {
                [(k, _)] => Ok(k.clone()),
                _ => Err(BrfError::UnsupportedSpace(format!("cas_χ{i} is not scalar"))),
            }
        };
        let l = match p.lambdas.as_slice() {
            [] => return Err(BrfError::UnsupportedSpace("k has no ideals".into())),
            [(l, _), rest @ ..] => {
                if rest.iter().any(|(m, _)| !(m.clone() - l.clone()).is_negligible(1e-12)) {
                    return Err(BrfError::UnsupportedSpace("λ is not uniform across ideals".into()));
                }
                l.clone()
            }
        };
        Ok(LegacyParams { c1: p.c1.clone(), lambda: l, kappa1: scalar(&p.kappas[0], 1)?, kappa2: scalar(&p.kappas[1], 2)? })
    }

    pub fn c2(&self) -> S {
        self.c1.clone() / (self.c1.clone() - S::one())
    }

    fn lift<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LegacyParams<T> {
        LegacyParams { c1: f(&self.c1), lambda: f(&self.lambda), kappa1: f(&self.kappa1), kappa2: f(&self.kappa2) }
    }

    pub fn to_f64(&self) -> LegacyParams<f64> {
        self.lift(|v| v.to_f64())
    }
}

/// Positive root of the quadratic from the `p₁` (or `p₂`) block; `κ = 0`
/// is accepted here for trivial isotypic summands.
pub(crate) fn block_root<S: Scalar>(x3: &S, z1: &S, kappa: &S, second: bool) -> Result<S> {
    let one = S::one();
    let two = S::from_i64(2);
    let zp = z1.clone() + one.clone();
    let u = x3.clone() / zp.clone() + zp / (x3.clone() * z1.clone() * z1.clone());
    let disc = kappa.clone() * kappa.clone() * u.clone() * u.clone()
        + (one.clone() - S::from_i64(4) * kappa.clone() * kappa.clone()) / (z1.clone() * z1.clone());
    let root = disc.sqrt().ok_or_else(|| BrfError::Numerical("discriminant has no representable square root".into()))?;
    let r = (kappa.clone() * u + root) / (two * kappa.clone() + one);
    Ok(if second { r * z1.clone() } else { r })
}

fn check_kappa<S: Scalar>(k: &S) -> Result<()> {
    if !k.is_positive() || k.clone() > S::from_ratio(1, 2) {
        return Err(BrfError::Parameter(format!("κ = {} outside (0, 1/2]", k.to_f64())));
    }
    Ok(())
}

fn check_pos<S: Scalar>(x3: &S, z1: &S) -> Result<()> {
    if !x3.is_positive() || !z1.is_positive() {
        return Err(BrfError::Parameter("x3 and z1 must be positive".into()));
    }
    Ok(())
}

/// `x₁(x₃, z₁)` solving the `p₁` equation.
pub fn solve_x1<S: Scalar>(x3: &S, z1: &S, kappa1: &S) -> Result<S> {
    check_kappa(kappa1)?;
    check_pos(x3, z1)?;
    block_root(x3, z1, kappa1, false)
}

/// `x₂(x₃, z₁)` solving the `p₂` equation.
pub fn solve_x2<S: Scalar>(x3: &S, z1: &S, kappa2: &S) -> Result<S> {
    check_kappa(kappa2)?;
    check_pos(x3, z1)?;
    block_root(x3, z1, kappa2, true)
}

/// `F(x₃, z₁)` with `x₁`, `x₂` eliminated.
pub fn legacy_f<S: Scalar>(lp: &LegacyParams<S>, x3: &S, z1: &S) -> Result<S> {
    let x1 = solve_x1(x3, z1, &lp.kappa1)?;
    let x2 = solve_x2(x3, z1, &lp.kappa2)?;
    let one = S::one();
    let l = lp.lambda.clone();
    let zp = z1.clone() + one.clone();
    let z1sq = z1.clone() * z1.clone();
    let p = (lp.c1.recip() - l.clone()) / (x1.clone() * x1)
        + (lp.c2().recip() - l.clone()) * z1sq.clone() / (x2.clone() * x2);
    let x3sq = x3.clone() * x3.clone();
    let root = (lp.c1.clone() / zp.clone())
        .sqrt()
        .ok_or_else(|| BrfError::Numerical("√(c₁/(z₁+1)) is not representable".into()))?;
    let tail = z1sq.clone() - z1.clone() + one + S::from_i64(3) * z1.clone() * root;
    Ok(p.clone() * x3sq.clone() * x3sq.clone() + (l.clone() * zp.clone() * zp.clone() - zp.clone() * zp / z1sq.clone() * p) * x3sq
        - l / z1sq * tail.clone() * tail)
}

/// `(∂F/∂x₃, ∂F/∂z₁)` by forward differentiation.
pub fn legacy_partials<S: Scalar>(lp: &LegacyParams<S>, x3: &S, z1: &S) -> Result<(S, S)> {
    let d = lp.lift(|v| Dual::constant(v.clone()));
    let fx = legacy_f(&d, &Dual::variable(x3.clone()), &Dual::constant(z1.clone()))?.d;
    let fz = legacy_f(&d, &Dual::constant(x3.clone()), &Dual::variable(z1.clone()))?.d;
    Ok((fx, fz))
}

/// `x₃′ = −F_z / F_x` at a point of the curve.
pub fn implicit_derivative<S: Scalar>(lp: &LegacyParams<S>, x3: &S, z1: &S) -> Result<S> {
    let (fx, fz) = legacy_partials(lp, x3, z1)?;
    if fx.is_negligible(1e-14) {
        return Err(BrfError::SingularPoint("∂F/∂x₃ vanishes".into()));
    }
    Ok(-fz / fx)
}

/// Positive root of `F(·, z₁)` by bracketing bisection and Newton polish.
pub fn legacy_solve(lp: &LegacyParams<f64>, z1: f64) -> Result<f64> {
    let f = |x: f64| legacy_f(lp, &x, &z1);
    let mut lo = 1e-3;
    let mut hi = 1.0;
    let mut flo = f(lo)?;
    while flo > 0.0 && lo > 1e-12 {
        lo *= 0.1;
        flo = f(lo)?;
    }
    let mut fhi = f(hi)?;
    let mut expansions = 0;
    while fhi.signum() == flo.signum() {
        hi *= 2.0;
        fhi = f(hi)?;
        expansions += 1;
        if expansions > 80 {
            return Err(BrfError::Numerical("no sign change of F found".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..5 {
        let (fx, _) = legacy_partials(lp, &x, &z1)?;
        let v = f(x)?;
        if v == 0.0 || fx == 0.0 {
            break;
        }
        let nx = x - v / fx;
        if !(nx > 0.0) || (nx - x).abs() > 1e-6 * x {
            break;
        }
        x = nx;
    }
    Ok(x)
}

/// Exact root at a rational `z₁`: `c₁/(c₁−1)` or a rationalized float root,
/// accepted only if `F` vanishes exactly there.
pub fn legacy_solve_exact<S: Scalar>(lp: &LegacyParams<S>, z1: &S) -> Result<S> {
    let guess = lp.c1.clone() / (lp.c1.clone() - S::one());
    if legacy_f(lp, &guess, z1).map(|v| v.is_zero()).unwrap_or(false) {
        return Ok(guess);
    }
    let xf = legacy_solve(&lp.to_f64(), z1.to_f64())?;
    let (n, d) = approx_rational(xf, 100_000);
    let cand = S::from_ratio(n, d);
    match legacy_f(lp, &cand, z1) {
        Ok(v) if v.is_zero() => Ok(cand),
        _ => Err(BrfError::Numerical(format!("legacy root {xf} at z1 = {} is not a small rational", z1.to_f64()))),
    }
}

#[derive(Clone, Debug)]
pub struct RicciRatios<S> {
    pub r1: S,
    pub r2: S,
    pub r3: S,
    pub r12: S,
    pub r13: S,
}

/// Ricci eigenvalues on `p₁`, `p₂`, `p₃` and their ratios.
pub fn ricci_ratios<S: Scalar>(lp: &LegacyParams<S>, m: &DiagonalMetric<S>) -> Result<RicciRatios<S>> {
    let one = S::one();
    let two = S::from_i64(2);
    let four = S::from_i64(4);
    let z1 = m.z1.clone();
    let zp = z1.clone() + one.clone();
    let [x1, x2, x3] = m.x.clone();
    let (k1, k2) = (lp.kappa1.clone(), lp.kappa2.clone());
    let r1 = (four.clone() * x1.clone() * z1.clone()).recip()
        * (two.clone() * k1.clone() + one.clone() - two.clone() * x3.clone() * k1 / (x1.clone() * zp.clone()));
    let r2 = (lp.c1.clone() - one.clone()) / (four.clone() * x2.clone())
        * (two.clone() * k2.clone() + one - two * x3.clone() * z1.clone() * k2 / (x2.clone() * zp.clone()));
    let l = lp.lambda.clone();
    let x3sq = x3.clone() * x3.clone();
    let r3 = lp.c1.clone() / (four * x3 * z1.clone() * zp.clone())
        * (l.clone() * zp.clone() * zp
            + (lp.c1.recip() - l.clone()) * x3sq.clone() / (x1.clone() * x1)
            + (lp.c2().recip() - l) * x3sq * z1.clone() * z1 / (x2.clone() * x2));
    if r2.is_negligible(1e-300) || r3.is_negligible(1e-300) {
        return Err(BrfError::Division("Ricci eigenvalue vanishes".into()));
    }
    Ok(RicciRatios { r12: r1.clone() / r2.clone(), r13: r1.clone() / r3.clone(), r1, r2, r3 })
}

/// Point of the legacy curve with `x₁`, `x₂` filled in.
pub fn legacy_metric<S: Scalar>(lp: &LegacyParams<S>, x3: &S, z1: &S) -> Result<DiagonalMetric<S>> {
    let x1 = solve_x1(x3, z1, &lp.kappa1)?;
    let x2 = solve_x2(x3, z1, &lp.kappa2)?;
    DiagonalMetric::new(z1.clone(), [x1, x2, x3.clone()])
}

/// `(r₁₂′, r₁₃′)` along the curve, by the chain rule through `x₃′`.
pub fn ratio_derivatives<S: Scalar>(lp: &LegacyParams<S>, x3: &S, z1: &S) -> Result<(S, S)> {
    let dx3 = implicit_derivative(lp, x3, z1)?;
    let d = lp.lift(|v| Dual::constant(v.clone()));
    let zd = Dual::variable(z1.clone());
    let xd = Dual::new(x3.clone(), dx3);
    let m = legacy_metric(&d, &xd, &zd)?;
    let r = ricci_ratios(&d, &m)?;
    Ok((r.r12.d, r.r13.d))
}

/// Everything the legacy analysis produces at one `z₁`.
#[derive(Clone, Debug)]
pub struct LegacyPoint<S> {
    pub z1: S,
    pub metric: DiagonalMetric<S>,
    pub f_x3: S,
    pub f_z1: S,
    pub x3_prime: S,
    pub ratios: RicciRatios<S>,
    pub r12_prime: S,
    pub r13_prime: S,
}

pub fn legacy_point<S: Scalar>(lp: &LegacyParams<S>, z1: &S) -> Result<LegacyPoint<S>> {
    let x3 = if S::EXACT { legacy_solve_exact(lp, z1)? } else { S::from_json(&json!(legacy_solve(&lp.to_f64(), z1.to_f64())?)).unwrap_or_else(S::one) };
    let (f_x3, f_z1) = legacy_partials(lp, &x3, z1)?;
    let x3_prime = implicit_derivative(lp, &x3, z1)?;
    let metric = legacy_metric(lp, &x3, z1)?;
    let ratios = ricci_ratios(lp, &metric)?;
    let (r12_prime, r13_prime) = ratio_derivatives(lp, &x3, z1)?;
    Ok(LegacyPoint { z1: z1.clone(), metric, f_x3, f_z1, x3_prime, ratios, r12_prime, r13_prime })
}

impl<S: Scalar> LegacyPoint<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "mode": H2Mode::Legacy,
            "z1": self.z1.to_json(),
            "x": self.metric.x.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "dF_dx3": self.f_x3.to_json(),
            "dF_dz1": self.f_z1.to_json(),
            "x3_prime": self.x3_prime.to_json(),
            "r1": self.ratios.r1.to_json(),
            "r2": self.ratios.r2.to_json(),
            "r3": self.ratios.r3.to_json(),
            "r12": self.ratios.r12.to_json(),
            "r13": self.ratios.r13.to_json(),
            "r12_prime": self.r12_prime.to_json(),
            "r13_prime": self.r13_prime.to_json(),
        })
    }
}

/// One row of the legacy-versus-corrected comparison.
#[derive(Clone, Debug)]
pub struct CorrigendumRow {
    pub z1: f64,
    pub legacy_x: [f64; 3],
    pub legacy_residual: f64,
    pub corrected_gk: [f64; 3],
    pub corrected_residual: f64,
    /// `H²` on `p₃` at the legacy point: legacy minus corrected closed form.
    pub p3_delta: f64,
}

pub fn corrigendum_report<S: Scalar>(emb: &Embedding<S>, consts: &AlgebraicConstants<S>, grid: &[f64]) -> Result<Vec<CorrigendumRow>> {
    let p = SpaceParams::from_constants(consts)?.to_f64();
    let lp = LegacyParams::from_space(&p)?;
    let mut rows = Vec::new();
    for &z1 in grid {
        let space = AlignedSpace::build(emb, consts, z1)?;
        let x3 = legacy_solve(&lp, z1)?;
        let lm = legacy_metric(&lp, &x3, &z1)?;
        let corrected = canonical_solution(&p, &z1)?;
        let lam = p.lambda_values();
        let hl = h_squared_closed(&p.c1, &lam, &lm, H2Mode::Legacy)?;
        let hc = h_squared_closed(&p.c1, &lam, &lm, H2Mode::Corrected)?;
        rows.push(CorrigendumRow {
            z1,
            legacy_x: lm.x,
            legacy_residual: super::brf_residual(&space, &lm)?,
            corrected_gk: gk_coordinates(&p.c1, &corrected.metric)?,
            corrected_residual: super::brf_residual(&space, &corrected.metric)?,
            p3_delta: hl.p3[0] - hc.p3[0],
        });
    }
    Ok(rows)
}

pub fn corrigendum_json(space_id: &str, rows: &[CorrigendumRow]) -> Value {
    json!({
        "space_id": space_id,
        "rows": rows.iter().map(|r| json!({
            "z1": round_f64(r.z1),
            "legacy": {"mode": H2Mode::Legacy, "x": r.legacy_x.map(round_f64), "residual": round_f64(r.legacy_residual)},
            "corrected": {"mode": H2Mode::Corrected, "gk_coordinates": r.corrected_gk.map(round_f64), "residual": round_f64(r.corrected_residual)},
            "h2_p3_delta": round_f64(r.p3_delta),
        })).collect::<Vec<_>>(),
    })
}
