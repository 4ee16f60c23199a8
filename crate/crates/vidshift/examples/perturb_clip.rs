//! Apply a single perturbation to a clip and write the frames to disk.
//!
//! Run with: cargo run --example perturb_clip [kind] [severity]

use vidshift::clipio::{pixel_checksum, synthetic_clip, write_clip};
use vidshift::{apply, ApplyOptions, Kind, Ladders, PerturbationSpec, SeedContext};

fn main() {
    let mut args = std::env::args().skip(1);
    let kind: Kind = args.next().as_deref().unwrap_or("gaussian").parse().unwrap();
    let severity: u8 = args.next().as_deref().unwrap_or("3").parse().unwrap();
    let spec = PerturbationSpec::new(kind, severity).unwrap();

    let clip = synthetic_clip("demo", 16, 128, 160);
    let ctx = SeedContext::new(7);
    let applied = apply(
        spec,
        &clip,
        &ctx,
        &Ladders::default(),
        &ApplyOptions::default(),
    )
    .unwrap();

    let out = std::env::temp_dir().join(format!("vidshift-demo-{kind}-{severity}"));
    write_clip(&applied.clip, &out).unwrap();
    if let Some(map) = &applied.index_map {
        println!("index map: {:?}", map.indices);
    }
    println!(
        "{} frames of {}x{} -> {}",
        applied.clip.len(),
        applied.clip.width(),
        applied.clip.height(),
        out.display()
    );
    println!("pixel checksum: {:016x}", pixel_checksum(&applied.clip));
}
