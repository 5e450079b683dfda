//! Multistart search for left-invariant BRF metrics with the Cartan form.

use brf::group_brf::{parse_algebra, verify_rigidity, GroupFrame};

fn main() -> brf::Result<()> {
    for spec in ["su2", "su2+su2", "su3"] {
        let gf = GroupFrame::new(parse_algebra(spec)?, None)?;
        let r = verify_rigidity(&gf, 100, 7)?;
        println!(
            "{spec:>8}: {} of {} starts converged, {} distinct solution(s), residual {:.1e}",
            r.converged, r.trials, r.solutions_found, r.max_residual
        );
        for s in &r.solutions {
            println!("          x = {:?}", s.iter().map(|v| (v * 1e9).round() / 1e9).collect::<Vec<_>>());
        }
    }
    Ok(())
}
