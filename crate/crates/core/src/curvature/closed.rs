//! Closed-form Ricci and torsion-square blocks for diagonal metrics.

use crate::aligned::{z_constants, ZConstants};
use crate::error::{BrfError, Result};
use crate::scalar::Scalar;
use std::str::FromStr;

/// `g = x₁ g_b|p₁ + x₂ g_b|p₂ + x₃ g_b|p₃` on the space with parameter `z₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMetric<S> {
    pub z1: S,
    pub x: [S; 3],
}

impl<S: Scalar> DiagonalMetric<S> {
    pub fn new(z1: S, x: [S; 3]) -> Result<Self> {
        if !z1.is_positive() || x.iter().any(|v| !v.is_positive()) {
            return Err(BrfError::Parameter("metric entries must be positive".into()));
        }
        Ok(DiagonalMetric { z1, x })
    }

    pub fn scaled(&self, c: &S) -> Self {
        DiagonalMetric { z1: self.z1.clone(), x: self.x.clone().map(|v| v * c.clone()) }
    }

    pub fn to_f64(&self) -> DiagonalMetric<f64> {
        DiagonalMetric { z1: self.z1.to_f64(), x: [self.x[0].to_f64(), self.x[1].to_f64(), self.x[2].to_f64()] }
    }
}

/// `id·I + cas·cas_χ` on one of `p₁`, `p₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOp<S> {
    pub id: S,
    pub cas: S,
}

impl<S: Scalar> BlockOp<S> {
    pub fn scale(&self, s: &S) -> Self {
        BlockOp { id: self.id.clone() * s.clone(), cas: self.cas.clone() * s.clone() }
    }

    /// Value on an isotypic component where `cas_χ` acts by `kappa`.
    pub fn at(&self, kappa: &S) -> S {
        self.id.clone() + self.cas.clone() * kappa.clone()
    }
}

/// Block description of an `Ad(K)`-invariant symmetric tensor on `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockForms<S> {
    pub p1: BlockOp<S>,
    pub p2: BlockOp<S>,
    /// Scalar on each `p₃^l`.
    pub p3: Vec<S>,
}

impl<S: Scalar> BlockForms<S> {
    pub fn scale(&self, s: &S) -> Self {
        BlockForms { p1: self.p1.scale(s), p2: self.p2.scale(s), p3: self.p3.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    /// Multiplies block `k` by `x_k`, turning an operator into a bilinear form.
    pub fn lower(&self, x: &[S; 3]) -> Self {
        BlockForms {
            p1: self.p1.scale(&x[0]),
            p2: self.p2.scale(&x[1]),
            p3: self.p3.iter().map(|v| v.clone() * x[2].clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let d = |a: &BlockOp<S>, b: &BlockOp<S>| BlockOp { id: a.id.clone() - b.id.clone(), cas: a.cas.clone() - b.cas.clone() };
        BlockForms {
            p1: d(&self.p1, &o.p1),
            p2: d(&self.p2, &o.p2),
            p3: self.p3.iter().zip(&o.p3).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> BlockForms<f64> {
        let f = |b: &BlockOp<S>| BlockOp { id: b.id.to_f64(), cas: b.cas.to_f64() };
        BlockForms { p1: f(&self.p1), p2: f(&self.p2), p3: self.p3.iter().map(Scalar::to_f64).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum H2Mode {
    Corrected,
    Legacy,
}

impl FromStr for H2Mode {
    type Err = BrfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(H2Mode::Corrected),
            "legacy" => Ok(H2Mode::Legacy),
            _ => Err(BrfError::Parameter(format!("unknown mode `{s}`"))),
        }
    }
}

fn two<S: Scalar>() -> S {
    S::from_i64(2)
}

/// Ricci operator of `g` in closed form.
pub fn ricci_operator_closed<S: Scalar>(c1: &S, lambdas: &[S], m: &DiagonalMetric<S>) -> Result<BlockForms<S>> {
    let z = z_constants(c1, &m.z1)?;
    let [x1, x2, x3] = m.x.clone();
    let c2 = c1.clone() / (c1.clone() - S::one());
    let ZConstants { z1, z2, a3, b3, .. } = z;
    let four = S::from_i64(4);
    let a3sq = a3.clone() * a3.clone();
    let p1 = BlockOp {
        id: (four.clone() * x1.clone() * z1.clone()).recip(),
        cas: (z1.recip() - x3.clone() / (x1.clone() * c1.clone() * b3.clone())) / (two::<S>() * x1.clone()),
    };
    let p2 = BlockOp {
        id: (four.clone() * x2.clone() * z2.clone()).recip(),
        cas: (z2.recip() - x3.clone() * a3sq.clone() / (x2.clone() * c2.clone() * b3.clone())) / (two::<S>() * x2.clone()),
    };
    let t1 = (two::<S>() * x1.clone() * x1.clone() - x3.clone() * x3.clone()) / (x1.clone() * x1.clone());
    let t2 = (two::<S>() * x2.clone() * x2.clone() - x3.clone() * x3.clone()) * a3sq.clone() / (x2.clone() * x2.clone());
    let lam_coef = t1.clone() + t2.clone()
        - (S::one() + a3.clone()) / b3.clone()
            * (z1.clone() / c1.clone() + z2.clone() * a3sq.clone() * a3.clone() / c2.clone());
    let rest = two::<S>() * (c1.recip() + a3sq / c2.clone()) - t1 / c1.clone() - t2 / c2;
    let pre = (four * x3 * b3).recip();
    let p3 = lambdas.iter().map(|l| pre.clone() * (l.clone() * lam_coef.clone() + rest.clone())).collect();
    Ok(BlockForms { p1, p2, p3 })
}

/// `H_Q²` for `g` in closed form, as a bilinear form in `g_b` units.
pub fn h_squared_closed<S: Scalar>(c1: &S, lambdas: &[S], m: &DiagonalMetric<S>, mode: H2Mode) -> Result<BlockForms<S>> {
    let z = z_constants(c1, &m.z1)?;
    let [x1, x2, x3] = m.x.clone();
    let c2 = c1.clone() / (c1.clone() - S::one());
    let ZConstants { z1, z2, y1, y2, a3, b3, c3, b4 } = z;
    let u1 = y1.clone() / z1.clone() + c3.clone() / b4.clone();
    let u2 = a3.clone() * y2.clone() / z2.clone() + c3.clone() / b4.clone();
    let s1 = u1.clone() * u1.clone() / (x3.clone() * b3.clone());
    let s2 = u2.clone() * u2.clone() / (x3.clone() * b3.clone());
    let block = |y: &S, x: &S, zk: &S, s: &S, ck: &S| {
        let base = y.clone() * y.clone() / (x.clone() * x.clone() * zk.powi(3));
        BlockOp { id: base.clone(), cas: two::<S>() * s.clone() / (x.clone() * ck.clone()) - two::<S>() * base }
    };
    let p1 = block(&y1, &x1, &z1, &s1, c1);
    let p2 = block(&y2, &x2, &z2, &s2, &c2);
    let f = match mode {
        H2Mode::Corrected => S::one(),
        H2Mode::Legacy => b4
            .sqrt()
            .ok_or_else(|| BrfError::Numerical("square root of B₄ is not representable".into()))?
            .recip(),
    };
    let inner = y1 / c1.clone() + a3.powi(3) * y2 / c2.clone() + S::from_i64(3) * c3 * f / b4 * b3.clone();
    let p3 = lambdas
        .iter()
        .map(|l| {
            u1.clone() * u1.clone() * (S::one() - c1.clone() * l.clone()) / (x1.clone() * x1.clone() * b3.clone() * c1.clone())
                + u2.clone() * u2.clone() * (S::one() - c2.clone() * l.clone())
                    / (x2.clone() * x2.clone() * b3.clone() * c2.clone())
                + l.clone() * inner.clone() * inner.clone() / (x3.clone() * x3.clone() * b3.powi(3))
        })
        .collect();
    Ok(BlockForms { p1, p2, p3 })
}

/// `x_k·Ric − ¼H²` blockwise (bilinear, `g_b` units).
pub fn brf_blocks<S: Scalar>(c1: &S, lambdas: &[S], m: &DiagonalMetric<S>, mode: H2Mode) -> Result<BlockForms<S>> {
    let ric = ricci_operator_closed(c1, lambdas, m)?.lower(&m.x);
    let h2 = h_squared_closed(c1, lambdas, m, mode)?;
    Ok(ric.sub(&h2.scale(&S::from_ratio(1, 4))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn canonical(z1: Q) -> DiagonalMetric<Q> {
        let x = [z1.recip(), q(1, 1), (z1.clone() + q(1, 1)) / z1.clone()];
        DiagonalMetric::new(z1, x).unwrap()
    }

    #[test]
    fn canonical_ricci_eigenvalues() {
        let c1 = q(11, 6);
        let lams = vec![q(4, 11), q(0, 1)];
        for z1 in [q(1, 2), q(1, 1), q(7, 3)] {
            let m = canonical(z1);
            let r = ricci_operator_closed(&c1, &lams, &m).unwrap();
            for (l, v) in lams.iter().zip(&r.p3) {
                assert_eq!(*v, c1.clone() * (q(1, 1) - l.clone()) / q(4, 1));
            }
        }
    }

    #[test]
    fn modes_agree_when_b4_is_one() {
        let c1 = q(2, 1);
        let m = DiagonalMetric::new(q(1, 1), [q(3, 2), q(2, 3), q(5, 7)]).unwrap();
        let a = h_squared_closed(&c1, &[q(1, 12)], &m, H2Mode::Corrected).unwrap();
        let b = h_squared_closed(&c1, &[q(1, 12)], &m, H2Mode::Legacy).unwrap();
        assert_eq!(a, b);
        let m2 = DiagonalMetric::new(q(1, 2), [q(3, 2), q(2, 3), q(5, 7)]).unwrap();
        let exact = h_squared_closed(&c1, &[q(1, 12)], &m2, H2Mode::Legacy);
        assert!(matches!(exact, Err(BrfError::Numerical(_))));
        let c1f = 2.0;
        assert!(h_squared_closed(&c1f, &[1.0 / 12.0], &m2.to_f64(), H2Mode::Legacy).is_ok());
    }

    #[test]
    fn s_constants_match_simplified_form() {
        let c1 = q(7, 6);
        let z1 = q(2, 5);
        let x3 = q(3, 1);
        let m = DiagonalMetric::new(z1.clone(), [q(1, 1), q(1, 1), x3.clone()]).unwrap();
        let h = h_squared_closed(&c1, &[], &m, H2Mode::Corrected).unwrap();
        let s1 = c1.clone() * (z1.clone() + q(1, 1)) / (x3.clone() * z1.powi(3));
        let base1 = z1.powi(3).recip();
        assert_eq!(h.p1.cas, q(2, 1) * s1 / c1.clone() - q(2, 1) * base1);
    }

    #[test]
    fn unknown_mode_rejected() {
        assert!(matches!("old".parse::<H2Mode>(), Err(BrfError::Parameter(_))));
    }
}
