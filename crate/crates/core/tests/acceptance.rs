//! Acceptance suite: one line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are stated in a form that cannot hold;
//! they are still evaluated and printed as FAIL, with the evidence.

use brf::aligned::{AlgebraicConstants, AlignedSpace, BlockKind, Embedding};
use brf::brf_solver::{
    brf_residual, canonical_metric, canonical_solution, legacy_point, multistart, positivity_certificate, LegacyParams, SpaceParams,
};
use brf::catalog::{catalog, catalog_test, group_catalog, load};
use brf::curvature::{
    h_squared_bruteforce, h_squared_closed_tensor, hq_form, ricci_bruteforce, ricci_closed, ricci_operator_closed,
    DiagonalMetric, H2Mode,
};
use brf::group_brf::{parse_algebra, verify_rigidity, GroupFrame};
use brf::grflow::{linearized_order_test, step_halving_test, FlowSystem};
use brf::liealg::{build_classical, build_g2, ClassicalFamily};
use brf::scalar::{q, Scalar, Q};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const KNOWN_FAILURES: &[(usize, &str)] = &[
    (2, "z₁ = 1 equals c₁ − 1 on SU(3)×SU(3)/SO(3), where B₄ = 1 and both formulas coincide"),
    (8, "the identity holds with coefficient −¼, not +¼"),
];

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

type Space = (Embedding<f64>, AlgebraicConstants<f64>);

fn float_space(id: &str) -> Space {
    let (_, e, c) = load::<f64>(id, 1e-10).unwrap();
    (e, c)
}

fn exact_params(id: &str) -> SpaceParams<Q> {
    let (_, _, c) = load::<Q>(id, 0.0).unwrap();
    SpaceParams::from_constants(&c).unwrap()
}

const SAMPLES: usize = 100;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Max deviation of closed forms from direct summation over seeded metrics.
fn oracle_sweep(f: impl Fn(&AlignedSpace, &DiagonalMetric<f64>) -> f64) -> (f64, String) {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for e in catalog() {
        let (emb, c) = float_space(&e.id);
        let n = SAMPLES;
        let zs: Vec<f64> = (0..3).map(|_| log_uniform(&mut rng, 0.1, 10.0)).collect();
        let spaces: Vec<AlignedSpace> = zs.iter().map(|z| AlignedSpace::build(&emb, &c, *z).unwrap()).collect();
        let mut w = 0.0f64;
        for k in 0..n {
            let sp = &spaces[k % 3];
            let x = [0; 3].map(|_| log_uniform(&mut rng, 0.2, 5.0));
            w = w.max(f(sp, &DiagonalMetric::new(sp.z1(), x).unwrap()));
        }
        parts.push(format!("{}:{}", e.id, n));
        worst = worst.max(w);
    }
    (worst, parts.join(" "))
}

fn c1_ricci() -> Outcome {
    let t = Instant::now();
    let (worst, samples) = oracle_sweep(|s, m| ricci_closed(s, m).unwrap().max_diff(&ricci_bruteforce(s, m).unwrap()));
    Outcome {
        id: 1,
        name: "oracle equivalence (Ricci)",
        passed: worst < 1e-9,
        detail: format!("max deviation {worst:.2e}; samples {samples}; {:.1}s", t.elapsed().as_secs_f64()),
    }
}

fn c2_h_squared() -> Outcome {
    let t = Instant::now();
    let (worst, _) = oracle_sweep(|s, m| {
        let h = hq_form(s);
        h_squared_closed_tensor(s, m, H2Mode::Corrected).unwrap().max_diff(&h_squared_bruteforce(s, m, &h).unwrap())
    });
    let (emb, c) = float_space("su3xsu3_so3");
    let p3_gap = |z1: f64| {
        let s = AlignedSpace::build(&emb, &c, z1).unwrap();
        let m = DiagonalMetric::new(z1, [1.3, 0.8, 2.1]).unwrap();
        let legacy = h_squared_closed_tensor(&s, &m, H2Mode::Legacy).unwrap();
        let direct = h_squared_bruteforce(&s, &m, &hq_form(&s)).unwrap();
        let a = legacy.block(BlockKind::P3(0)).unwrap();
        let b = direct.block(BlockKind::P3(0)).unwrap();
        a.sub(&b).max_abs()
    };
    let at_one = p3_gap(1.0);
    let at_half = p3_gap(0.5);
    Outcome {
        id: 2,
        name: "oracle equivalence (H², corrected) + legacy discrepancy",
        passed: worst < 1e-9 && at_one > 1e-3,
        detail: format!(
            "corrected max deviation {worst:.2e}; legacy p₃ gap at z₁=1 is {at_one:.2e} (required > 1e-3); at z₁=1/2 it is {at_half:.2e}; {:.1}s",
            t.elapsed().as_secs_f64()
        ),
    }
}

fn z_grid(c1: f64) -> Vec<f64> {
    vec![0.1, 0.5, c1 - 1.0, 1.0, 2.0, 10.0]
}

fn c3_existence() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut where_ = String::new();
    for e in catalog() {
        let (emb, c) = float_space(&e.id);
        let p = SpaceParams::from_constants(&c).unwrap();
        for z1 in z_grid(c.c1) {
            let s = canonical_solution(&p, &z1).unwrap();
            let space = AlignedSpace::build(&emb, &c, z1).unwrap();
            let r = brf_residual(&space, &s.metric).unwrap();
            if r > worst {
                worst = r;
                where_ = format!("{} at z₁={z1}", e.id);
            }
        }
    }
    Outcome {
        id: 3,
        name: "BRF existence",
        passed: worst < 1e-10,
        detail: format!("max residual (Ricci, dH, δH) {worst:.2e} ({where_}); {:.1}s", t.elapsed().as_secs_f64()),
    }
}

fn c4_collapse() -> Outcome {
    let mut spread = 0.0f64;
    let mut exact_ok = true;
    let mut c2_count = 0;
    for e in catalog() {
        let p = exact_params(&e.id);
        let c1 = p.c1.to_f64();
        let pf = p.to_f64();
        let gks: Vec<[f64; 3]> = z_grid(c1).iter().map(|z| canonical_solution(&pf, z).unwrap().gk).collect();
        for g in &gks {
            for i in 0..3 {
                spread = spread.max((g[i] - gks[0][i]).abs());
            }
        }
        if p.c1 == q(2, 1) {
            c2_count += 1;
            for z in [q(1, 10), q(1, 2), q(1, 1), q(2, 1), q(10, 1)] {
                exact_ok &= canonical_solution(&p, &z).unwrap().gk == [q(1, 1), q(1, 1), q(2, 1)];
            }
        }
    }
    Outcome {
        id: 4,
        name: "single-metric collapse",
        passed: spread < 1e-10 && exact_ok && c2_count >= 3,
        detail: format!("g_K spread {spread:.2e}; exact (1,1,2) on {c2_count} spaces with c₁=2: {exact_ok}"),
    }
}

fn c5_spectrum() -> Outcome {
    let mut exact_ok = true;
    let mut float_dev = 0.0f64;
    for e in catalog() {
        let p = exact_params(&e.id);
        let quarter = q(1, 4);
        for z in [q(1, 2), q(1, 1), q(3, 1)] {
            let m = canonical_metric(&z).unwrap();
            let r = ricci_operator_closed(&p.c1, &p.lambda_values(), &m).unwrap();
            exact_ok &= p.kappas[0].iter().all(|(k, _)| r.p1.at(k) == quarter);
            exact_ok &= p.kappas[1].iter().all(|(k, _)| r.p2.at(k) == (p.c1.clone() - q(1, 1)) * quarter.clone());
            exact_ok &= r.p3.iter().zip(&p.lambdas).all(|(v, (l, _))| *v == p.c1.clone() * (q(1, 1) - l.clone()) * quarter.clone());
        }
        if e.expected.dims.iter().sum::<usize>() > 40 {
            continue;
        }
        // operator spectrum with multiplicities from direct summation
        let (emb, c) = float_space(&e.id);
        let z1 = 0.7;
        let space = AlignedSpace::build(&emb, &c, z1).unwrap();
        let m = canonical_metric(&z1).unwrap();
        let ric = ricci_bruteforce(&space, &m).unwrap();
        let w = space.weights(m.x);
        let n = w.len();
        let op = DMatrix::from_fn(n, n, |i, j| ric.matrix.get(i, j) / (w[i] * w[j]).sqrt());
        let mut ev: Vec<f64> = op.symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        let pf = p.to_f64();
        let mut want: Vec<f64> = vec![0.25; c.dims[0]];
        want.extend(vec![(pf.c1 - 1.0) / 4.0; c.dims[1]]);
        for (l, d) in &pf.lambdas {
            want.extend(vec![pf.c1 * (1.0 - l) / 4.0; *d]);
        }
        want.sort_by(f64::total_cmp);
        if want.len() != ev.len() {
            float_dev = f64::INFINITY;
        } else {
            float_dev = float_dev.max(ev.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    Outcome {
        id: 5,
        name: "Ricci spectrum at g₀",
        passed: exact_ok && float_dev < 1e-10,
        detail: format!("exact block values match: {exact_ok}; direct-summation spectrum with multiplicities deviates {float_dev:.2e}"),
    }
}

fn c6_legacy() -> Outcome {
    let t = Instant::now();
    let point = |id: &str, z: Q| {
        let lp = LegacyParams::from_space(&exact_params(id)).unwrap();
        legacy_point(&lp, &z).unwrap()
    };
    let a = point("su3xsu3_so3", q(1, 1));
    let lam = q(1, 12);
    let mut checks = vec![
        ("∂F/∂x₃", a.f_x3.clone(), q(16, 1) * (q(1, 1) - lam.clone())),
        ("∂F/∂z₁", a.f_z1.clone(), q(16, 1) - q(10, 1) * lam.clone()),
        ("x₃′", a.x3_prime.clone(), -(q(8, 1) - q(5, 1) * lam.clone()) / (q(8, 1) * (q(1, 1) - lam))),
        ("∂F/∂x₃ value", a.f_x3.clone(), q(44, 3)),
        ("∂F/∂z₁ value", a.f_z1.clone(), q(91, 6)),
        ("x₃′ value", a.x3_prime.clone(), q(-91, 88)),
        ("r₁₃′", a.r13_prime.clone(), q(45, 2662)),
    ];
    let b = point("so8xso7_g2", q(5, 6));
    checks.extend([
        ("∂F/∂x₃ (G₂)", b.f_x3.clone(), q(847, 90)),
        ("∂F/∂z₁ (G₂)", b.f_z1.clone(), q(1994, 125)),
        ("x₃′ (G₂)", b.x3_prime.clone(), q(-35892, 21175)),
        ("r₁₂′ (G₂)", b.r12_prime.clone(), q(-864, 46585)),
    ]);
    let x_ok = a.metric.x == [q(1, 1), q(1, 1), q(2, 1)] && b.metric.x[2] == q(11, 5);
    let bad: Vec<String> = checks.iter().filter(|(_, g, w)| g != w).map(|(n, g, w)| format!("{n}: got {g}, want {w}")).collect();
    let secs = t.elapsed().as_secs_f64();
    Outcome {
        id: 6,
        name: "legacy exact numbers",
        passed: bad.is_empty() && x_ok && secs < 10.0,
        detail: if bad.is_empty() {
            format!("{} exact equalities; legacy points (1,1,2) and x₃=11/5; {secs:.2}s", checks.len())
        } else {
            bad.join("; ")
        },
    }
}

fn c7_uniqueness() -> Outcome {
    let mut cert_ok = true;
    let mut cert_count = 0;
    for e in catalog() {
        let p = exact_params(&e.id);
        let c1 = p.c1.clone();
        let zs = [q(1, 10), q(1, 2), c1 - q(1, 1), q(1, 1), q(2, 1), q(10, 1)];
        for z in zs {
            let m = canonical_metric(&z).unwrap();
            for entry in positivity_certificate(&p, &m) {
                cert_count += 1;
                cert_ok &= entry.positive;
            }
        }
    }
    let mut others = 0;
    let mut converged = 0;
    for id in ["su2xsu3_s1", "su3xsu3_so3"] {
        let p = exact_params(id).to_f64();
        for z1 in [0.5, 1.0, 2.0] {
            let r = multistart(&p, z1, 50, 11).unwrap();
            others += r.other_solutions;
            converged += r.converged;
        }
    }
    Outcome {
        id: 7,
        name: "uniqueness",
        passed: cert_ok && others == 0 && converged > 0,
        detail: format!(
            "{cert_count} certificate entries positive: {cert_ok}; 50-start search: {converged} converged runs, {others} non-canonical solutions"
        ),
    }
}

fn c8_group() -> Outcome {
    let mut rigid = true;
    let mut summary = Vec::new();
    for g in group_catalog() {
        let gf = GroupFrame::new(parse_algebra(&g.algebra).unwrap(), None).unwrap();
        let r = verify_rigidity(&gf, 100, 5).unwrap();
        let only_ones = r.solutions.iter().all(|s| s.iter().all(|v| (v - 1.0).abs() < 1e-8));
        rigid &= r.solutions_found == 1 && only_ones;
        summary.push(format!("{}: {} solution(s) from {} converged", g.id, r.solutions_found, r.converged));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut dev_plus, mut dev_minus) = (0.0f64, 0.0f64);
    for spec in ["su2", "su2+su2", "su3"] {
        let gf = GroupFrame::new(parse_algebra(spec).unwrap(), None).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..gf.dim()).map(|_| log_uniform(&mut rng, 0.2, 5.0)).collect();
            let m = gf.metric(x).unwrap();
            let lhs = m.ricci_bruteforce().sub(&m.hb_squared().scale(&0.25));
            let res = m.brf_group_equations();
            dev_plus = dev_plus.max(lhs.sub(&res.scale(&0.25)).max_abs());
            dev_minus = dev_minus.max(lhs.sub(&res.scale(&-0.25)).max_abs());
        }
    }
    Outcome {
        id: 8,
        name: "group rigidity + identity",
        passed: rigid && dev_plus < 1e-10,
        detail: format!(
            "{}; |Ric − ¼H² − ¼·BRF1| = {dev_plus:.2e} (stated form), |Ric − ¼H² + ¼·BRF1| = {dev_minus:.2e}",
            summary.join(", ")
        ),
    }
}

fn c9_flow() -> Outcome {
    let mut fixed = 0.0f64;
    let mut supported = Vec::new();
    let mut ratios_all = Vec::new();
    for e in catalog() {
        let p = exact_params(&e.id);
        for z1 in [0.3, 1.0, 4.0] {
            let Ok(sys) = FlowSystem::new(&p, z1, 1.0) else { continue };
            let r = sys.rhs(sys.canonical()).unwrap();
            fixed = fixed.max(r.iter().map(|v| v.abs()).fold(0.0, f64::max));
        }
        if let Ok(sys) = FlowSystem::new(&p, 1.0, 1.0) {
            supported.push(e.id.clone());
            let mut x0 = sys.canonical();
            x0[0] *= 1.3;
            x0[2] *= 0.8;
            let (_, r) = step_halving_test(&sys, x0, 1.0, 8, 3).unwrap();
            ratios_all.extend(r);
            let (_, r) = linearized_order_test(&sys, sys.canonical(), [0.1, -0.05, 0.02], 2.0, &[10, 20, 40, 80]).unwrap();
            ratios_all.extend(r);
        }
    }
    let ok_ratios = ratios_all.iter().all(|r| (14.0..=18.0).contains(r));
    let (lo, hi) = ratios_all.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    Outcome {
        id: 9,
        name: "flow fixed point + RK4 order",
        passed: fixed < 1e-12 && ok_ratios && !supported.is_empty(),
        detail: format!(
            "max |rhs(g₀)| {fixed:.2e} on {} supported spaces; {} halving ratios in [{lo:.2}, {hi:.2}]",
            supported.len(),
            ratios_all.len()
        ),
    }
}

fn c10_structure() -> Outcome {
    let exact = catalog_test(true, 0.0);
    let float = catalog_test(false, 1e-10);
    let mut jac = 0.0f64;
    for (fam, ns) in [(ClassicalFamily::Su, 2..8), (ClassicalFamily::So, 3..11), (ClassicalFamily::Sp, 1..5)] {
        for n in ns {
            jac = jac.max(build_classical::<f64>(fam, n).unwrap().jacobi_residual());
        }
    }
    jac = jac.max(build_g2::<f64>().unwrap().jacobi_residual());
    for g in group_catalog() {
        jac = jac.max(parse_algebra(&g.algebra).unwrap().jacobi_residual());
    }
    let listed = [("su3xsu3_so3", q(2, 1)), ("so8xso7_g2", q(11, 6)), ("so10xsu4_sp2", q(7, 6)), ("su7xso8_so7", q(10, 7))];
    let listed_ok = listed.iter().all(|(id, c1)| load::<Q>(id, 0.0).unwrap().2.c1 == *c1);
    let failed: Vec<String> = exact.entries.iter().chain(&float.entries).filter(|e| !e.passed).map(|e| e.id.clone()).collect();
    Outcome {
        id: 10,
        name: "structural properties",
        passed: exact.passed && float.passed && jac < 1e-12 && listed_ok,
        detail: format!(
            "catalog exact {} / float {} ({} entries); max Jacobi residual {jac:.2e}; listed c₁ exact: {listed_ok}{}",
            exact.passed,
            float.passed,
            exact.entries.len(),
            if failed.is_empty() { String::new() } else { format!("; failing {failed:?}") }
        ),
    }
}

#[test]
fn acceptance() {
    let runs: Vec<fn() -> Outcome> =
        vec![c1_ricci, c2_h_squared, c3_existence, c4_collapse, c5_spectrum, c6_legacy, c7_uniqueness, c8_group, c9_flow, c10_structure];
    let mut unexpected = Vec::new();
    println!();
    for run in runs {
        let o = run();
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id);
        println!("[{}] {:>2}. {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
        match (o.passed, known) {
            (false, Some((_, why))) => println!("           known: {why}"),
            (false, None) => unexpected.push(o.id),
            (true, Some(_)) => println!("           note: listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
