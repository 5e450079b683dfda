use brf::brf_solver::{
    canonical_metric, canonical_solution, equations, homothety_invariants, implicit_derivative, legacy_f, legacy_partials,
    legacy_solve, multistart, ricci_ratios, legacy_metric, solve_corrected, LegacyParams, SpaceParams,
};
use brf::catalog::{catalog, load};
use brf::curvature::H2Mode;
use brf::scalar::{q, Scalar, Q};
use proptest::prelude::*;

fn exact(id: &str) -> SpaceParams<Q> {
    let (_, _, c) = load::<Q>(id, 0.0).unwrap();
    SpaceParams::from_constants(&c).unwrap()
}

fn scalar_ids() -> Vec<String> {
    catalog()
        .into_iter()
        .map(|e| e.id)
        .filter(|id| LegacyParams::from_space(&exact(id)).is_ok())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_metric_solves_exactly(n in 1i64..60, d in 1i64..60, which in 0usize..4) {
        let id = ["su3xsu3_so3", "so8xso7_g2", "su2xsu3_s1", "su4xsu4_sp2"][which];
        let p = exact(id);
        let z = q(n, d);
        let m = canonical_metric(&z).unwrap();
        prop_assert!(equations(&p, &m, H2Mode::Corrected).unwrap().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn gk_coordinates_do_not_depend_on_z1(n in 1i64..60, d in 1i64..60) {
        let p = exact("so8xso7_g2");
        let s = canonical_solution(&p, &q(n, d)).unwrap();
        prop_assert_eq!(s.gk, [q(1, 1), q(6, 5), q(11, 5)]);
    }

    #[test]
    fn corrected_solver_returns_the_canonical_metric(n in 1i64..40, d in 1i64..40) {
        let p = exact("su3xsu3_so3");
        let z = q(n, d);
        let sols = solve_corrected(&p, &z).unwrap();
        prop_assert_eq!(sols.len(), 1);
        prop_assert_eq!(&sols[0].metric.x, &canonical_metric(&z).unwrap().x);
    }

    #[test]
    fn homothety_invariants_ignore_scale(z1 in 0.1f64..10.0, c in 0.1f64..10.0) {
        let p = exact("su4xsu4_sp2").to_f64();
        let m = canonical_metric(&z1).unwrap();
        let a = homothety_invariants(&p, &m).unwrap();
        let b = homothety_invariants(&p, &m.scaled(&c)).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u.0 - v.0).abs() < 1e-12 && u.1 == v.1);
        }
    }

    #[test]
    fn legacy_partials_match_central_differences(z1 in 0.3f64..4.0, x3 in 0.5f64..4.0) {
        let lp = LegacyParams::from_space(&exact("so8xso7_g2")).unwrap().to_f64();
        let (fx, fz) = legacy_partials(&lp, &x3, &z1).unwrap();
        let h = 1e-6;
        let dx = (legacy_f(&lp, &(x3 + h), &z1).unwrap() - legacy_f(&lp, &(x3 - h), &z1).unwrap()) / (2.0 * h);
        let dz = (legacy_f(&lp, &x3, &(z1 + h)).unwrap() - legacy_f(&lp, &x3, &(z1 - h)).unwrap()) / (2.0 * h);
        prop_assert!((fx - dx).abs() < 1e-6 * (1.0 + fx.abs()));
        prop_assert!((fz - dz).abs() < 1e-6 * (1.0 + fz.abs()));
    }
}

#[test]
fn implicit_derivative_follows_the_curve() {
    for id in scalar_ids() {
        let lp = LegacyParams::from_space(&exact(&id)).unwrap().to_f64();
        for z1 in [0.4, 1.0, 2.5] {
            let x3 = legacy_solve(&lp, z1).unwrap();
            assert!(legacy_f(&lp, &x3, &z1).unwrap().abs() < 1e-9, "{id} z1={z1}");
            let h = 1e-5;
            let fd = (legacy_solve(&lp, z1 + h).unwrap() - legacy_solve(&lp, z1 - h).unwrap()) / (2.0 * h);
            let d = implicit_derivative(&lp, &x3, &z1).unwrap();
            assert!((d - fd).abs() < 1e-5 * (1.0 + d.abs()), "{id} z1={z1}: {d} vs {fd}");
        }
    }
}

#[test]
fn legacy_curve_meets_canonical_point_at_unit_b4() {
    for id in scalar_ids() {
        let p = exact(&id);
        let lp = LegacyParams::from_space(&p).unwrap();
        let z = p.c1.clone() - q(1, 1);
        let x3 = (z.clone() + q(1, 1)) / z.clone();
        assert!(legacy_f(&lp, &x3, &z).unwrap().is_zero(), "{id}");
    }
}

#[test]
fn equal_casimirs_fix_r12() {
    for id in scalar_ids() {
        let p = exact(&id);
        let lp = LegacyParams::from_space(&p).unwrap();
        if lp.kappa1 != lp.kappa2 {
            continue;
        }
        let lf = lp.to_f64();
        for z1 in [0.5, 1.5] {
            let x3 = legacy_solve(&lf, z1).unwrap();
            let m = legacy_metric(&lf, &x3, &z1).unwrap();
            let r = ricci_ratios(&lf, &m).unwrap();
            let want = 1.0 / (lf.c1 - 1.0);
            assert!((r.r12 - want).abs() < 1e-9, "{id}: {} vs {want}", r.r12);
        }
    }
}

#[test]
fn multistart_finds_only_the_canonical_metric() {
    let p = exact("su3xsu3_so3").to_f64();
    let r = multistart(&p, 0.8, 30, 3).unwrap();
    assert!(r.converged > 0);
    assert_eq!(r.other_solutions, 0);
    assert!(r.max_distance_to_canonical < 1e-8);
}

#[test]
fn legacy_mode_canonical_point_is_not_a_solution_off_unit_b4() {
    let p = exact("su3xsu3_so3").to_f64();
    let m = canonical_metric(&0.5).unwrap();
    assert!(equations(&p, &m, H2Mode::Legacy).unwrap().iter().any(|e| e.abs() > 1e-3));
}
