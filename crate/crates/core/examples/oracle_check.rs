//! Closed-form Ricci and H² against direct summation on random metrics.

use brf::aligned::AlignedSpace;
use brf::catalog::load;
use brf::curvature::{h_squared_bruteforce, h_squared_closed_tensor, hq_form, ricci_bruteforce, ricci_closed, DiagonalMetric, H2Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> brf::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "su4xsu4_sp2".into());
    let (_, emb, consts) = load::<f64>(&id, 1e-10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let z1 = 0.7;
    let space = AlignedSpace::build(&emb, &consts, z1)?;
    let h = hq_form(&space);
    let (mut dr, mut dh, mut dl) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let m = DiagonalMetric::new(z1, [0; 3].map(|_| rng.gen_range(0.2..5.0)))?;
        dr = dr.max(ricci_closed(&space, &m)?.max_diff(&ricci_bruteforce(&space, &m)?));
        let hb = h_squared_bruteforce(&space, &m, &h)?;
        dh = dh.max(h_squared_closed_tensor(&space, &m, H2Mode::Corrected)?.max_diff(&hb));
        dl = dl.max(h_squared_closed_tensor(&space, &m, H2Mode::Legacy)?.max_diff(&hb));
    }
    println!("{id}: |Ric closed - direct| = {dr:.2e}");
    println!("{id}: |H2 corrected - direct| = {dh:.2e}");
    println!("{id}: |H2 legacy - direct|    = {dl:.2e}");
    Ok(())
}
