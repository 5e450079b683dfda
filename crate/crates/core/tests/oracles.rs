//! Closed forms against direct summation on small spaces.

use brf::aligned::{AlgebraicConstants, AlignedSpace, Embedding};
use brf::catalog::load;
use brf::curvature::{
    h_squared_bruteforce, h_squared_closed, h_squared_closed_tensor, hq_form, ricci_bruteforce, ricci_closed,
    ricci_operator_closed, DiagonalMetric, H2Mode,
};
use brf::scalar::{q, Scalar, Q};
use proptest::prelude::*;
use std::sync::OnceLock;

fn space(id: &str) -> &'static (Embedding<f64>, AlgebraicConstants<f64>) {
    static CACHE: OnceLock<Vec<(String, (Embedding<f64>, AlgebraicConstants<f64>))>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ["su2xsu3_s1", "su3xsu3_so3", "su2xsu2_s1_1_2"]
            .iter()
            .map(|id| {
                let (_, e, c) = load::<f64>(id, 1e-10).unwrap();
                (id.to_string(), (e, c))
            })
            .collect()
    });
    &all.iter().find(|(k, _)| k == id).unwrap().1
}

fn build(id: &str, z1: f64) -> AlignedSpace {
    let (e, c) = space(id);
    AlignedSpace::build(e, c, z1).unwrap()
}

fn pos() -> impl Strategy<Value = f64> {
    (-1.5f64..1.5).prop_map(f64::exp)
}

fn small_space() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["su2xsu3_s1", "su3xsu3_so3", "su2xsu2_s1_1_2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ricci_closed_matches_summation(id in small_space(), z1 in pos(), x in [pos(), pos(), pos()]) {
        let s = build(id, z1);
        let m = DiagonalMetric::new(z1, x).unwrap();
        let d = ricci_closed(&s, &m).unwrap().max_diff(&ricci_bruteforce(&s, &m).unwrap());
        prop_assert!(d < 1e-9, "deviation {d}");
    }

    #[test]
    fn h_squared_closed_matches_summation(id in small_space(), z1 in pos(), x in [pos(), pos(), pos()]) {
        let s = build(id, z1);
        let m = DiagonalMetric::new(z1, x).unwrap();
        let closed = h_squared_closed_tensor(&s, &m, H2Mode::Corrected).unwrap();
        let direct = h_squared_bruteforce(&s, &m, &hq_form(&s)).unwrap();
        prop_assert!(closed.max_diff(&direct) < 1e-9);
    }

    #[test]
    fn ricci_is_scale_invariant(z1 in pos(), x in [pos(), pos(), pos()], c in pos()) {
        let s = build("su3xsu3_so3", z1);
        let m = DiagonalMetric::new(z1, x).unwrap();
        let a = ricci_bruteforce(&s, &m).unwrap();
        let b = ricci_bruteforce(&s, &m.scaled(&c)).unwrap();
        prop_assert!(a.max_diff(&b) < 1e-9);
    }

    #[test]
    fn h_squared_scales_inverse_square(z1 in pos(), x in [pos(), pos(), pos()], c in pos()) {
        let s = build("su2xsu3_s1", z1);
        let h = hq_form(&s);
        let m = DiagonalMetric::new(z1, x).unwrap();
        let a = h_squared_bruteforce(&s, &m, &h).unwrap();
        let b = h_squared_bruteforce(&s, &m.scaled(&c), &h).unwrap();
        let d = a.matrix.scale(&(1.0 / (c * c))).sub(&b.matrix).max_abs();
        prop_assert!(d < 1e-9, "deviation {d}");
    }

    #[test]
    fn h_squared_is_positive_semidefinite(id in small_space(), z1 in pos(), x in [pos(), pos(), pos()]) {
        let s = build(id, z1);
        let m = DiagonalMetric::new(z1, x).unwrap();
        let h2 = h_squared_bruteforce(&s, &m, &hq_form(&s)).unwrap();
        let low = h2.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!(low > -1e-10, "eigenvalue {low}");
    }

    #[test]
    fn closed_forms_are_block_diagonal(id in small_space(), z1 in pos(), x in [pos(), pos(), pos()]) {
        let s = build(id, z1);
        let m = DiagonalMetric::new(z1, x).unwrap();
        prop_assert!(ricci_bruteforce(&s, &m).unwrap().off_block_max() < 1e-10);
        prop_assert!(h_squared_bruteforce(&s, &m, &hq_form(&s)).unwrap().off_block_max() < 1e-10);
    }

    #[test]
    fn exact_and_float_closed_forms_agree(a in 1i64..20, b in 1i64..20, xs in [1i64..30, 1i64..30, 1i64..30]) {
        let (_, _, c) = load::<Q>("so8xso7_g2", 0.0).unwrap();
        let lambdas = c.lambdas.clone();
        let m = DiagonalMetric::new(q(a, b), xs.map(|v| q(v, 7))).unwrap();
        let rq = ricci_operator_closed(&c.c1, &lambdas, &m).unwrap().to_f64();
        let hq = h_squared_closed(&c.c1, &lambdas, &m, H2Mode::Corrected).unwrap().to_f64();
        let lf: Vec<f64> = lambdas.iter().map(Scalar::to_f64).collect();
        let mf = m.to_f64();
        let rf = ricci_operator_closed(&c.c1.to_f64(), &lf, &mf).unwrap();
        let hf = h_squared_closed(&c.c1.to_f64(), &lf, &mf, H2Mode::Corrected).unwrap();
        let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + u.abs());
        prop_assert!(close(rq.p1.id, rf.p1.id) && close(rq.p1.cas, rf.p1.cas));
        prop_assert!(close(rq.p2.id, rf.p2.id) && close(rq.p2.cas, rf.p2.cas));
        prop_assert!(rq.p3.iter().zip(&rf.p3).all(|(u, v)| close(*u, *v)));
        prop_assert!(hq.p3.iter().zip(&hf.p3).all(|(u, v)| close(*u, *v)));
    }
}

#[test]
fn legacy_and_corrected_h_squared_differ_away_from_unit_b4() {
    let s = build("su3xsu3_so3", 0.5);
    let m = DiagonalMetric::new(0.5, [1.3, 0.8, 2.1]).unwrap();
    let legacy = h_squared_closed_tensor(&s, &m, H2Mode::Legacy).unwrap();
    let direct = h_squared_bruteforce(&s, &m, &hq_form(&s)).unwrap();
    assert!(legacy.max_diff(&direct) > 1e-3);
}
