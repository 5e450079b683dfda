//! Catalog listing and self-test.

use brf::catalog::{catalog, catalog_test, group_catalog};

fn main() {
    for e in catalog() {
        println!("{:<16} c1 = {:<6} {}", e.id, e.expected.c1.to_string(), e.description);
    }
    for g in group_catalog() {
        println!("{:<16} group of dimension {}", g.id, g.dim);
    }
    let r = catalog_test(true, 0.0);
    for e in &r.entries {
        let bad: Vec<&str> = e.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        println!("{:<16} {}", e.id, if e.passed { "ok".to_string() } else { format!("FAILED {bad:?}") });
    }
}
