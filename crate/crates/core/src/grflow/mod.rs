//! Generalized Ricci flow `∂g = −2 ricci(g) + ½H²` restricted to the
//! diagonal family `(x₁, x₂, x₃)_{g_b}`, with `H = c·H_Q` frozen.

use crate::aligned::AlignedSpace;
use crate::brf_solver::{LegacyParams, SpaceParams};
use crate::curvature::{codifferential, hq_form, DiagonalMetric, H2Mode, ThreeForm};
use crate::error::{BrfError, Result};
use crate::scalar::{round_f64, Dual, Scalar};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

/// Flow restricted to a space where `−2Ric + ½H²` stays in the family.
#[derive(Clone, Debug)]
pub struct FlowSystem {
    pub params: LegacyParams<f64>,
    pub z1: f64,
    /// `H = h_scale · H_Q`.
    pub h_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowState {
    pub t: f64,
    pub x: [f64; 3],
    pub h_scale: f64,
    /// `max |4Ric − H²|` in operator units.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Completed,
    Equilibrium,
    PositivityLost,
    BlowUp,
    StepUnderflow,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub status: FlowStatus,
    pub rejected_steps: usize,
    /// Largest `‖δ_g H‖` seen at accepted steps, when a space model was given.
    pub max_codifferential: Option<f64>,
}

impl FlowSystem {
    /// Requires scalar Casimirs and a single `λ`, so the right-hand side
    /// has one scalar per summand.
    pub fn new<S: Scalar>(p: &SpaceParams<S>, z1: f64, h_scale: f64) -> Result<Self> {
        let params = LegacyParams::from_space(p)?.to_f64();
        if !(z1 > 0.0) || !(h_scale > 0.0) {
            return Err(BrfError::Parameter("z1 and h_scale must be positive".into()));
        }
        Ok(FlowSystem { params, z1, h_scale })
    }

    fn blocks<S: Scalar>(&self, x: [S; 3], lift: impl Fn(f64) -> S) -> Result<[S; 3]> {
        let m = DiagonalMetric { z1: lift(self.z1), x };
        let lp = &self.params;
        let ric = crate::curvature::ricci_operator_closed(&lift(lp.c1), &[lift(lp.lambda)], &m)?.lower(&m.x);
        let h2 = crate::curvature::h_squared_closed(&lift(lp.c1), &[lift(lp.lambda)], &m, H2Mode::Corrected)?;
        let c2 = lift(self.h_scale * self.h_scale * 0.5);
        let two = S::from_i64(-2);
        let k1 = lift(lp.kappa1);
        let k2 = lift(lp.kappa2);
        Ok([
            two.clone() * ric.p1.at(&k1) + c2.clone() * h2.p1.at(&k1),
            two.clone() * ric.p2.at(&k2) + c2.clone() * h2.p2.at(&k2),
            two * ric.p3[0].clone() + c2 * h2.p3[0].clone(),
        ])
    }

    /// `(dx₁, dx₂, dx₃)`.
    pub fn rhs(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        if x.iter().any(|v| !(*v > 0.0)) {
            return Err(BrfError::Parameter("metric entries must be positive".into()));
        }
        self.blocks(x, |v| v)
    }

    /// Jacobian of the right-hand side.
    pub fn jacobian(&self, x: [f64; 3]) -> Result<DMatrix<f64>> {
        let mut j = DMatrix::zeros(3, 3);
        for c in 0..3 {
            let xd = [0, 1, 2].map(|i| Dual::new(x[i], if i == c { 1.0 } else { 0.0 }));
            let r = self.blocks(xd, Dual::constant)?;
            for row in 0..3 {
                j[(row, c)] = r[row].d;
            }
        }
        Ok(j)
    }

    /// `max_k |4Ric − H²|` on `p_k`, operator units.
    pub fn residual(&self, x: [f64; 3]) -> Result<f64> {
        let r = self.rhs(x)?;
        Ok((0..3).map(|i| (2.0 * r[i] / x[i]).abs()).fold(0.0, f64::max))
    }

    pub fn canonical(&self) -> [f64; 3] {
        let z = self.z1;
        [1.0 / z, 1.0, (z + 1.0) / z].map(|v| v * self.h_scale)
    }

    fn state(&self, t: f64, x: [f64; 3]) -> Result<FlowState> {
        Ok(FlowState { t, x, h_scale: self.h_scale, residual: self.residual(x)? })
    }
}

fn rk4_step(sys: &FlowSystem, x: [f64; 3], h: f64) -> Result<[f64; 3]> {
    let add = |a: [f64; 3], k: [f64; 3], s: f64| [0, 1, 2].map(|i| a[i] + s * k[i]);
    let pos = |a: [f64; 3]| -> Result<[f64; 3]> {
        if a.iter().all(|v| *v > 0.0) {
            Ok(a)
        } else {
            Err(BrfError::Numerical("positivity lost inside a step".into()))
        }
    };
    let k1 = sys.rhs(x)?;
    let k2 = sys.rhs(pos(add(x, k1, h / 2.0))?)?;
    let k3 = sys.rhs(pos(add(x, k2, h / 2.0))?)?;
    let k4 = sys.rhs(pos(add(x, k3, h))?)?;
    Ok([0, 1, 2].map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

#[derive(Clone, Debug)]
pub struct StepControl {
    pub h0: f64,
    pub tol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { h0: 0.05, tol: 1e-8, h_min: 1e-12, max_steps: 100_000 }
    }
}

/// Adaptive RK4 with step doubling: a step is accepted when one full step
/// and two half steps agree to `tol`.
pub fn integrate(sys: &FlowSystem, x0: [f64; 3], t_end: f64, ctl: &StepControl, space: Option<&AlignedSpace>) -> Result<Trajectory> {
    if x0.iter().any(|v| !(*v > 0.0)) {
        return Err(BrfError::Parameter("x0 must be positive".into()));
    }
    let h_form: Option<ThreeForm> = space.map(|s| hq_form(s).scale(sys.h_scale));
    let delta = |x: [f64; 3]| -> Result<Option<f64>> {
        match (space, &h_form) {
            (Some(s), Some(h)) => Ok(Some(codifferential(s, &DiagonalMetric { z1: sys.z1, x }, h)?.max_abs())),
            _ => Ok(None),
        }
    };
    let mut max_delta = delta(x0)?;
    let mut states = vec![sys.state(0.0, x0)?];
    let (mut t, mut x, mut h) = (0.0, x0, ctl.h0);
    let mut rejected = 0;
    let mut status = FlowStatus::Completed;
    let rhs_norm = |x: [f64; 3]| -> Result<f64> { Ok(sys.rhs(x)?.iter().fold(0.0f64, |m, v| m.max(v.abs()))) };
    while t < t_end {
        if rhs_norm(x)? < 1e-12 {
            status = FlowStatus::Equilibrium;
            break;
        }
        if states.len() > ctl.max_steps {
            return Err(BrfError::Numerical("step budget exhausted".into()));
        }
        h = h.min(t_end - t);
        let full = rk4_step(sys, x, h);
        let half = rk4_step(sys, x, h / 2.0).and_then(|m| rk4_step(sys, m, h / 2.0));
        let (full, half) = match (full, half) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                h /= 2.0;
                rejected += 1;
                if h < ctl.h_min {
                    status = FlowStatus::PositivityLost;
                    break;
                }
                continue;
            }
        };
        let err = (0..3).map(|i| (full[i] - half[i]).abs()).fold(0.0, f64::max);
        if err > ctl.tol {
            h /= 2.0;
            rejected += 1;
            if h < ctl.h_min {
                status = FlowStatus::StepUnderflow;
                break;
            }
            continue;
        }
        t += h;
        x = half;
        if x.iter().any(|v| !(*v > 0.0)) {
            status = FlowStatus::PositivityLost;
            break;
        }
        if x.iter().any(|v| *v > 1e6) {
            states.push(sys.state(t, x)?);
            status = FlowStatus::BlowUp;
            break;
        }
        if let Some(d) = delta(x)? {
            max_delta = Some(max_delta.unwrap_or(0.0).max(d));
        }
        states.push(sys.state(t, x)?);
        if err < ctl.tol / 64.0 {
            h *= 2.0;
        }
    }
    Ok(Trajectory { states, status, rejected_steps: rejected, max_codifferential: max_delta })
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x1,x2,x3,residual\n");
        for st in &self.states {
            s.push_str(&format!("{:.12e},{:.12e},{:.12e},{:.12e},{:.6e}\n", st.t, st.x[0], st.x[1], st.x[2], st.residual));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let last = self.states.last();
        json!({
            "status": self.status,
            "steps": self.states.len() - 1,
            "rejected_steps": self.rejected_steps,
            "final_t": last.map(|s| round_f64(s.t)),
            "final_x": last.map(|s| s.x.map(round_f64)),
            "final_residual": last.map(|s| round_f64(s.residual)),
            "max_codifferential": self.max_codifferential.map(round_f64),
        })
    }
}

/// Global errors of fixed-step RK4 on the linearization at `x*` against the
/// matrix exponential, for `h, h/2, …`; returns `(errors, ratios)`.
pub fn linearized_order_test(sys: &FlowSystem, at: [f64; 3], y0: [f64; 3], t_end: f64, steps: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
    let j = sys.jacobian(at)?;
    let y0v = DVector::from_row_slice(&y0);
    let exact = (j.clone() * t_end).exp() * &y0v;
    let mut errs = Vec::new();
    for &n in steps {
        let h = t_end / n as f64;
        let mut y = y0v.clone();
        for _ in 0..n {
            let k1 = &j * &y;
            let k2 = &j * (&y + &k1 * (h / 2.0));
            let k3 = &j * (&y + &k2 * (h / 2.0));
            let k4 = &j * (&y + &k3 * h);
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        errs.push((y - &exact).amax());
    }
    let ratios = errs.windows(2).map(|w| w[0] / w[1]).collect();
    Ok((errs, ratios))
}

/// Fixed-step RK4 on the full flow.
pub fn integrate_fixed(sys: &FlowSystem, x0: [f64; 3], t_end: f64, n: usize) -> Result<[f64; 3]> {
    let h = t_end / n as f64;
    let mut x = x0;
    for _ in 0..n {
        x = rk4_step(sys, x, h)?;
    }
    Ok(x)
}

/// Step-halving on the nonlinear flow: `d_k = ‖x_{n_k} − x_{2n_k}‖` for
/// `n, 2n, 4n, …`, returned with the ratios `d_k / d_{k+1}`.
pub fn step_halving_test(sys: &FlowSystem, x0: [f64; 3], t_end: f64, n0: usize, refinements: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let sols = (0..refinements + 2).map(|k| integrate_fixed(sys, x0, t_end, n0 << k)).collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = sols.windows(2).map(|w| (0..3).map(|i| (w[0][i] - w[1][i]).abs()).fold(0.0, f64::max)).collect();
    let ratios = diffs.windows(2).map(|w| w[0] / w[1]).collect();
    Ok((diffs, ratios))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligned::{analyze, builtin_embedding};
    use crate::scalar::Q;

    fn system(id: &str, z1: f64, c: f64) -> FlowSystem {
        let (_, consts) = analyze(builtin_embedding::<Q>(id).unwrap(), 0.0).unwrap();
        FlowSystem::new(&SpaceParams::from_constants(&consts).unwrap(), z1, c).unwrap()
    }

    #[test]
    fn canonical_is_fixed() {
        let s = system("su3xsu3_so3", 0.8, 1.0);
        let r = s.rhs(s.canonical()).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-12));
        let t = integrate(&s, s.canonical(), 1.0, &StepControl::default(), None).unwrap();
        assert_eq!(t.status, FlowStatus::Equilibrium);
    }

    #[test]
    fn scaled_pair_is_fixed() {
        let s = system("so8xso7_g2", 1.3, 1.01);
        assert!(s.rhs(s.canonical()).unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn perturbed_state_moves() {
        let s = system("su3xsu3_so3", 1.0, 1.0);
        let mut x = s.canonical();
        x[0] *= 1.1;
        assert!(s.rhs(x).unwrap().iter().any(|v| v.abs() > 1e-4));
    }

    #[test]
    fn nonscalar_casimir_rejected() {
        let (_, consts) = analyze(builtin_embedding::<Q>("su2xsu3_s1").unwrap(), 0.0).unwrap();
        let p = SpaceParams::from_constants(&consts).unwrap();
        assert!(matches!(FlowSystem::new(&p, 1.0, 1.0), Err(BrfError::UnsupportedSpace(_))));
    }

    #[test]
    fn fourth_order() {
        let s = system("su3xsu3_so3", 1.0, 1.0);
        let (_, r) = linearized_order_test(&s, s.canonical(), [0.1, -0.05, 0.02], 2.0, &[10, 20, 40, 80]).unwrap();
        assert!(r.iter().all(|v| (14.0..=18.0).contains(v)), "{r:?}");
        let mut x0 = s.canonical();
        x0[0] *= 1.3;
        x0[2] *= 0.8;
        let (_, r) = step_halving_test(&s, x0, 1.0, 8, 3).unwrap();
        assert!(r.iter().all(|v| (14.0..=18.0).contains(v)), "{r:?}");
    }
}
