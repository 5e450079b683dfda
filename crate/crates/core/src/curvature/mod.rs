//! Ricci tensor, the canonical 3-form `H_Q`, torsion square, `d` and `δ`,
//! each both in closed form and by direct summation over a frame.

mod closed;
mod frame;

pub use closed::*;
pub use frame::*;

use crate::aligned::{AlignedSpace, BlockKind};
use crate::error::{BrfError, Result};
use crate::linalg::{sym_eigenvalues, Mat};
use serde::Serialize;
use serde_json::{json, Value};
use std::ops::Range;

/// Symmetric tensor on `p` in `g_b`-frame components with block labels.
#[derive(Clone, Debug)]
pub struct SymmetricTwoTensor {
    pub matrix: Mat<f64>,
    pub blocks: Vec<(BlockKind, Range<usize>)>,
}

impl SymmetricTwoTensor {
    pub fn new(space: &AlignedSpace, matrix: Mat<f64>) -> Self {
        SymmetricTwoTensor { matrix, blocks: block_layout(space) }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        self.matrix.sub(&o.matrix).max_abs()
    }

    /// Largest entry outside the diagonal blocks.
    pub fn off_block_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, (_, ri)) in self.blocks.iter().enumerate() {
            for (j, (_, rj)) in self.blocks.iter().enumerate() {
                if i == j {
                    continue;
                }
                for a in ri.clone() {
                    for b in rj.clone() {
                        worst = worst.max(self.matrix.get(a, b).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn block(&self, kind: BlockKind) -> Option<Mat<f64>> {
        let (_, r) = self.blocks.iter().find(|(k, _)| *k == kind)?;
        Some(Mat::from_fn(r.len(), r.len(), |i, j| *self.matrix.get(r.start + i, r.start + j)))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        sym_eigenvalues(&self.matrix)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<f64>> = (0..self.matrix.rows).map(|r| self.matrix.row(r).to_vec()).collect();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|(k, r)| json!({"block": k, "start": r.start, "end": r.end}))
            .collect();
        json!({"matrix": rows, "blocks": blocks})
    }
}

/// Contiguous `p` blocks of the adapted frame.
pub fn block_layout(space: &AlignedSpace) -> Vec<(BlockKind, Range<usize>)> {
    let mut out = vec![(BlockKind::P1, space.block_range(BlockKind::P1)), (BlockKind::P2, space.block_range(BlockKind::P2))];
    for (l, r) in space.p3_ranges().into_iter().enumerate() {
        out.push((BlockKind::P3(l), r));
    }
    out.retain(|(_, r)| !r.is_empty());
    out
}

fn check_metric(space: &AlignedSpace, m: &DiagonalMetric<f64>) -> Result<Vec<f64>> {
    if (m.z1 - space.z1()).abs() > 1e-12 * space.z1().max(1.0) {
        return Err(BrfError::Misuse(format!("metric has z1 = {} but the space model uses {}", m.z1, space.z1())));
    }
    if m.x.iter().any(|v| !(*v > 0.0)) {
        return Err(BrfError::Parameter("metric entries must be positive".into()));
    }
    Ok(space.weights(m.x))
}

pub fn ricci_bruteforce(space: &AlignedSpace, m: &DiagonalMetric<f64>) -> Result<SymmetricTwoTensor> {
    let w = check_metric(space, m)?;
    Ok(SymmetricTwoTensor::new(space, space.frame.ricci(&w)))
}

/// Expands block scalars into a frame matrix.
pub fn blocks_to_frame(space: &AlignedSpace, f: &BlockForms<f64>) -> Mat<f64> {
    let np = space.np();
    let mut out = Mat::zeros(np, np);
    for (i, (kind, op)) in [(BlockKind::P1, &f.p1), (BlockKind::P2, &f.p2)].into_iter().enumerate() {
        let r = space.block_range(kind);
        let cas = &space.cas_frame[i];
        for a in 0..r.len() {
            for b in 0..r.len() {
                let id = if a == b { op.id } else { 0.0 };
                out.set(r.start + a, r.start + b, id + op.cas * cas.get(a, b));
            }
        }
    }
    for (l, r) in space.p3_ranges().into_iter().enumerate() {
        for a in r {
            out.set(a, a, f.p3[l]);
        }
    }
    out
}

/// Ricci tensor as a bilinear form from the closed expressions.
pub fn ricci_closed(space: &AlignedSpace, m: &DiagonalMetric<f64>) -> Result<SymmetricTwoTensor> {
    check_metric(space, m)?;
    let f = ricci_operator_closed(&space.consts.c1, &space.consts.lambdas, m)?.lower(&m.x);
    Ok(SymmetricTwoTensor::new(space, blocks_to_frame(space, &f)))
}

/// `H_Q(X,Y,Z) = Q([X,Y],Z) + Q([X,Y]_k,Z) − Q([X,Z]_k,Y) + Q([Y,Z]_k,X)`.
pub fn hq_form(space: &AlignedSpace) -> ThreeForm {
    let fr = &space.frame;
    let (n, np) = (fr.n, fr.np);
    let q = &space.q_frame;
    let k = space.k_range();
    let mut h = ThreeForm::zeros(np);
    for a in 0..np {
        for b in 0..np {
            for c in 0..np {
                let mut s = 0.0;
                for m in 0..n {
                    s += fr.c(a, b, m) * q.get(m, c);
                }
                for m in k.clone() {
                    s += fr.c(a, b, m) * q.get(m, c) - fr.c(a, c, m) * q.get(m, b) + fr.c(b, c, m) * q.get(m, a);
                }
                h.data[(a * np + b) * np + c] = s;
            }
        }
    }
    h
}

pub fn h_squared_bruteforce(space: &AlignedSpace, m: &DiagonalMetric<f64>, h: &ThreeForm) -> Result<SymmetricTwoTensor> {
    let w = check_metric(space, m)?;
    Ok(SymmetricTwoTensor::new(space, space.frame.h_squared(h, &w)))
}

pub fn h_squared_closed_tensor(space: &AlignedSpace, m: &DiagonalMetric<f64>, mode: H2Mode) -> Result<SymmetricTwoTensor> {
    check_metric(space, m)?;
    let f = h_squared_closed(&space.consts.c1, &space.consts.lambdas, m, mode)?;
    Ok(SymmetricTwoTensor::new(space, blocks_to_frame(space, &f)))
}

pub fn exterior_derivative(space: &AlignedSpace, h: &ThreeForm) -> FourForm {
    space.frame.exterior_derivative(h)
}

/// `δ_g H` in `g`-orthonormal components.
pub fn codifferential(space: &AlignedSpace, m: &DiagonalMetric<f64>, h: &ThreeForm) -> Result<Mat<f64>> {
    let w = check_metric(space, m)?;
    Ok(to_g_orthonormal(&space.frame.codifferential(h, &w), &w))
}

/// Components of `4·Ric − H²` as operators, i.e. in `g`-orthonormal units.
pub fn brf_defect(space: &AlignedSpace, m: &DiagonalMetric<f64>, h: &ThreeForm) -> Result<Mat<f64>> {
    let w = check_metric(space, m)?;
    let ric = space.frame.ricci(&w);
    let h2 = space.frame.h_squared(h, &w);
    Ok(to_g_orthonormal(&ric.scale(&4.0).sub(&h2), &w))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualBreakdown {
    pub ricci: f64,
    pub harmonic: f64,
    pub closed: f64,
}

impl ResidualBreakdown {
    pub fn max(&self) -> f64 {
        self.ricci.max(self.harmonic).max(self.closed)
    }
}

/// `max(‖4Ric − H²‖, ‖δH‖, ‖dH‖)` by direct summation.
pub fn brf_residual_parts(space: &AlignedSpace, m: &DiagonalMetric<f64>, h: &ThreeForm) -> Result<ResidualBreakdown> {
    Ok(ResidualBreakdown {
        ricci: brf_defect(space, m, h)?.max_abs(),
        harmonic: codifferential(space, m, h)?.max_abs(),
        closed: exterior_derivative(space, h).max_abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligned::{analyze, builtin_embedding, s1_pq};
    use crate::scalar::Q;

    fn space(id: &str, z1: f64) -> AlignedSpace {
        let (emb, c) = analyze(builtin_embedding::<Q>(id).unwrap(), 0.0).unwrap();
        AlignedSpace::build(&emb, &c, z1).unwrap()
    }

    fn canonical(z1: f64) -> DiagonalMetric<f64> {
        DiagonalMetric::new(z1, [1.0 / z1, 1.0, (z1 + 1.0) / z1]).unwrap()
    }

    #[test]
    fn normal_metric_on_s1_quotient() {
        let (emb, c) = analyze(s1_pq::<Q>(1, 1).unwrap(), 0.0).unwrap();
        let sp = AlignedSpace::build(&emb, &c, 1.0).unwrap();
        let m = DiagonalMetric::new(1.0, [1.0, 1.0, 1.0]).unwrap();
        let rb = ricci_bruteforce(&sp, &m).unwrap();
        let rc = ricci_closed(&sp, &m).unwrap();
        assert!(rb.max_diff(&rc) < 1e-12);
    }

    #[test]
    fn polarization_matches_bilinear() {
        let sp = space("su3xsu3_so3", 0.7);
        let w = sp.weights([0.9, 1.7, 0.4]);
        let mt = sp.frame.m_tensor(&w);
        let np = sp.np();
        for (a, b) in [(0, 1), (2, 7), (4, 11), (3, 3)] {
            let mut xp = vec![0.0; np];
            let mut xm = vec![0.0; np];
            xp[a] += 1.0;
            xp[b] += 1.0;
            xm[a] += 1.0;
            xm[b] -= 1.0;
            let pol = 0.25 * (sp.frame.m_quadratic(&xp, &w) - sp.frame.m_quadratic(&xm, &w));
            assert!((pol - mt.get(a, b)).abs() < 1e-12);
        }
    }

    #[test]
    fn hq_is_closed_and_antisymmetric() {
        let sp = space("su3xsu3_so3", 1.3);
        let h = hq_form(&sp);
        assert!(h.antisymmetry_defect() < 1e-12);
        assert!(exterior_derivative(&sp, &h).max_abs() < 1e-10);
    }

    #[test]
    fn canonical_metric_is_brf() {
        let sp = space("su3xsu3_so3", 0.5);
        let h = hq_form(&sp);
        let r = brf_residual_parts(&sp, &canonical(0.5), &h).unwrap();
        assert!(r.max() < 1e-10, "{r:?}");
    }

    #[test]
    fn closed_forms_match_bruteforce() {
        let sp = space("su3xsu3_so3", 0.8);
        let h = hq_form(&sp);
        let m = DiagonalMetric::new(0.8, [0.6, 1.9, 2.3]).unwrap();
        assert!(ricci_bruteforce(&sp, &m).unwrap().max_diff(&ricci_closed(&sp, &m).unwrap()) < 1e-10);
        let hb = h_squared_bruteforce(&sp, &m, &h).unwrap();
        let hc = h_squared_closed_tensor(&sp, &m, H2Mode::Corrected).unwrap();
        assert!(hb.max_diff(&hc) < 1e-10);
        let hl = h_squared_closed_tensor(&sp, &m, H2Mode::Legacy).unwrap();
        assert!(hb.max_diff(&hl) > 1e-4);
    }

    #[test]
    fn wrong_z1_is_misuse() {
        let sp = space("su3xsu3_so3", 0.8);
        assert!(matches!(ricci_bruteforce(&sp, &canonical(1.0)), Err(BrfError::Misuse(_))));
    }
}
