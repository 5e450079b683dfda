//! Corrected BRF solutions over a z₁ grid, checked by direct summation.

use brf::aligned::AlignedSpace;
use brf::brf_solver::{solve_corrected, with_bruteforce, SpaceParams};
use brf::catalog::load;
use brf::scalar::{q, Q};

fn main() -> brf::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "so8xso7_g2".into());
    let (_, emb, consts) = load::<Q>(&id, 0.0)?;
    let p = SpaceParams::from_constants(&consts)?;
    for z1 in [q(1, 10), q(1, 2), q(1, 1), q(2, 1), q(10, 1)] {
        let space = AlignedSpace::build(&emb, &consts, brf::scalar::Scalar::to_f64(&z1))?;
        for s in solve_corrected(&p, &z1)? {
            let s = with_bruteforce(&space, s)?;
            let x: Vec<String> = s.metric.x.iter().map(|v| v.to_string()).collect();
            let gk: Vec<String> = s.gk.iter().map(|v| v.to_string()).collect();
            println!("z1 = {z1:>5}  x = ({})  g_K = ({})  residual = {:.1e}", x.join(", "), gk.join(", "), s.residual.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
