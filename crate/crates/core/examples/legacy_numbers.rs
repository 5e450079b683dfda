//! Exact partial derivatives and Ricci-ratio slopes of the legacy curve.

use brf::brf_solver::{legacy_point, LegacyParams, SpaceParams};
use brf::catalog::load;
use brf::scalar::{q, Q};

fn main() -> brf::Result<()> {
    for (id, z1) in [("su3xsu3_so3", q(1, 1)), ("so8xso7_g2", q(5, 6))] {
        let (_, _, consts) = load::<Q>(id, 0.0)?;
        let lp = LegacyParams::from_space(&SpaceParams::from_constants(&consts)?)?;
        let pt = legacy_point(&lp, &z1)?;
        println!("{id} at z1 = {z1}");
        println!("  x      = ({}, {}, {})", pt.metric.x[0], pt.metric.x[1], pt.metric.x[2]);
        println!("  dF/dx3 = {}", pt.f_x3);
        println!("  dF/dz1 = {}", pt.f_z1);
        println!("  x3'    = {}", pt.x3_prime);
        println!("  r12'   = {}", pt.r12_prime);
        println!("  r13'   = {}", pt.r13_prime);
    }
    Ok(())
}
