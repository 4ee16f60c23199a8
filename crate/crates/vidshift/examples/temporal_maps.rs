//! Show the frame index maps the five temporal perturbations produce for a
//! short clip, at every severity.
//!
//! Run with: cargo run --example temporal_maps

use vidshift::temporal::{
    box_jumbling_map, freezing_map, jumbling_map, reversal_map, sampling_map,
};
use vidshift::{Kind, Ladders, SeedContext};
use vidshift::ladder::Params;

fn main() {
    let t = 16;
    let ctx = SeedContext::new(7);
    let ladders = Ladders::default();
    let kinds = [
        Kind::Sampling,
        Kind::Reversal,
        Kind::Jumbling,
        Kind::BoxJumbling,
        Kind::Freezing,
    ];
    for kind in kinds {
        println!("[{kind}] T = {t}");
        for severity in 1..=5 {
            let seed = ctx.derive_seed("demo", kind, severity, None);
            let map = match ladders.params(kind, severity).unwrap() {
                Params::Sampling { k } => sampling_map(t, k as usize),
                Params::Reversal { k } => reversal_map(t, k as usize),
                Params::Jumbling { m } => jumbling_map(t, m as usize, seed),
                Params::BoxJumbling { m } => box_jumbling_map(t, m as usize, seed),
                Params::Freezing { p } => freezing_map(t, p, seed),
                other => unreachable!("{other:?}"),
            };
            println!("  severity {severity}: {:?}", map.indices);
        }
        println!();
    }
}
