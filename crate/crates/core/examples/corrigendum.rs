//! Legacy torsion-square formula against the corrected one.

use brf::brf_solver::corrigendum_report;
use brf::catalog::load;

fn main() -> brf::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "su3xsu3_so3".into());
    let (_, emb, consts) = load::<f64>(&id, 1e-10)?;
    let rows = corrigendum_report(&emb, &consts, &[0.25, 0.5, 1.0, 2.0, 4.0])?;
    println!("{:>6} {:>14} {:>14} {:>12}", "z1", "legacy resid", "fixed resid", "dH2 on p3");
    for r in rows {
        println!("{:>6} {:>14.3e} {:>14.3e} {:>12.6}", r.z1, r.legacy_residual, r.corrected_residual, r.p3_delta);
    }
    Ok(())
}
