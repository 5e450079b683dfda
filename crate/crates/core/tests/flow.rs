use brf::brf_solver::SpaceParams;
use brf::catalog::load;
use brf::grflow::{integrate, integrate_fixed, step_halving_test, FlowStatus, FlowSystem, StepControl};
use brf::scalar::Q;
use proptest::prelude::*;

fn system(id: &str, z1: f64, h_scale: f64) -> FlowSystem {
    let (_, _, c) = load::<Q>(id, 0.0).unwrap();
    FlowSystem::new(&SpaceParams::from_constants(&c).unwrap(), z1, h_scale).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_metric_is_stationary(z1 in 0.1f64..10.0, c in 0.2f64..5.0) {
        let s = system("so8xso7_g2", z1, c);
        let r = s.rhs(s.canonical()).unwrap();
        prop_assert!(r.iter().all(|v| v.abs() < 1e-12), "{r:?}");
    }

    #[test]
    fn fixed_step_and_adaptive_agree(d in [0.8f64..1.2, 0.8f64..1.2, 0.8f64..1.2]) {
        let s = system("su3xsu3_so3", 1.0, 1.0);
        let c = s.canonical();
        let x0 = [c[0] * d[0], c[1] * d[1], c[2] * d[2]];
        let a = integrate_fixed(&s, x0, 0.5, 400).unwrap();
        let t = integrate(&s, x0, 0.5, &StepControl::default(), None).unwrap();
        if t.status == FlowStatus::Completed {
            let b = t.states.last().unwrap().x;
            prop_assert!((0..3).all(|i| (a[i] - b[i]).abs() < 1e-6));
        }
    }
}

#[test]
fn nonscalar_spaces_are_rejected() {
    let (_, _, c) = load::<Q>("su2xsu3_s1", 0.0).unwrap();
    let p = SpaceParams::from_constants(&c).unwrap();
    if p.kappas.iter().any(|k| k.len() > 1) {
        assert!(FlowSystem::new(&p, 1.0, 1.0).is_err());
    }
}

#[test]
fn rk4_is_fourth_order() {
    let s = system("su4xsu4_sp2", 0.7, 1.0);
    let mut x0 = s.canonical();
    x0[1] *= 1.2;
    let (_, ratios) = step_halving_test(&s, x0, 1.0, 8, 3).unwrap();
    assert!(ratios.iter().all(|r| (14.0..=18.0).contains(r)), "{ratios:?}");
}

#[test]
fn trajectory_csv_has_one_row_per_state() {
    let s = system("su3xsu3_so3", 1.0, 1.0);
    let t = integrate(&s, [1.2, 1.0, 2.0], 0.5, &StepControl::default(), None).unwrap();
    assert_eq!(t.to_csv().lines().count(), t.states.len() + 1);
    assert!(t.states.iter().all(|st| st.x.iter().all(|v| *v > 0.0)));
}
