//! Algebraic constants of a catalog space in exact arithmetic.
//!
//! `cargo run --example analyze_space -- so8xso7_g2`

use brf::catalog::{constants_json, load};
use brf::scalar::Q;

fn main() -> brf::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "su3xsu3_so3".into());
    let (entry, _, consts) = load::<Q>(&id, 0.0)?;
    println!("{}: {}", entry.id, entry.description);
    println!("c1 = {}, c2 = {}", consts.c1, consts.c2);
    for (l, d) in consts.lambdas.iter().zip(consts.ideal_dims()) {
        println!("lambda = {l} on an ideal of dimension {d}");
    }
    for i in 1..=2 {
        match consts.kappa(i) {
            Some(k) => println!("cas on p{i} = {k}"),
            None => println!("cas on p{i} is not scalar"),
        }
    }
    println!("{}", serde_json::to_string_pretty(&constants_json(&id, &consts)).unwrap());
    Ok(())
}
