//! List all 90 perturbation specs with their ladder parameters.
//!
//! Run with: cargo run --example enumerate_specs

use vidshift::{enumerate_specs, Category, Ladders};

fn main() {
    let ladders = Ladders::default();
    let specs = enumerate_specs();
    println!("{} specs, ladder version {}", specs.len(), ladders.version);
    for cat in Category::ALL {
        println!("\n[{cat}]");
        for spec in specs.iter().filter(|s| s.kind.category() == cat) {
            let params = ladders.params(spec.kind, spec.severity).unwrap();
            println!("  {spec}  {params:?}");
        }
    }
}
