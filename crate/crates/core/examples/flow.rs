//! Generalized Ricci flow from a perturbed canonical metric, written as CSV.

use brf::brf_solver::SpaceParams;
use brf::catalog::load;
use brf::grflow::{integrate, FlowSystem, StepControl};

fn main() -> brf::Result<()> {
    let (_, _, consts) = load::<f64>("su3xsu3_so3", 1e-10)?;
    let sys = FlowSystem::new(&SpaceParams::from_constants(&consts)?, 1.0, 1.0)?;
    let g0 = sys.canonical();
    println!("rhs at the canonical metric: {:?}", sys.rhs(g0)?);
    let x0 = [g0[0] * 1.02, g0[1] * 0.98, g0[2]];
    let traj = integrate(&sys, x0, 5.0, &StepControl::default(), None)?;
    println!("status {:?} after {} states", traj.status, traj.states.len());
    let csv = traj.to_csv();
    for line in csv.lines().step_by((traj.states.len() / 10).max(1)) {
        println!("{line}");
    }
    Ok(())
}
