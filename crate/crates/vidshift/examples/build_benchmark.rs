//! Build a small benchmark from synthetic clips, rerun it to demonstrate
//! resumability, and verify it against its manifest.
//!
//! Run with: cargo run --example build_benchmark

use vidshift::bench::{BuildOptions, TestEntry};
use vidshift::clipio::{synthetic_clip, write_clip};
use vidshift::{
    build_benchmark, enumerate_specs, verify_benchmark, Category, Ladders, ProtocolConfig,
    SeedContext,
};

fn main() {
    let work = std::env::temp_dir().join("vidshift-example-bench");
    let inputs = work.join("clean");
    let root = work.join("bench");
    let _ = std::fs::remove_dir_all(&work);

    let entries: Vec<TestEntry> = (0..2)
        .map(|i| {
            let id = format!("vid{i:03}");
            let path = inputs.join(&id);
            write_clip(&synthetic_clip(&id, 12, 64, 64), &path).unwrap();
            TestEntry { video_id: id, path, label: i }
        })
        .collect();

    // temporal kinds only, to keep the example quick: 5 kinds x 5
    // severities x 2 videos = 50 rows
    let opts = BuildOptions {
        filter: Some(
            enumerate_specs()
                .into_iter()
                .filter(|s| s.kind.category() == Category::Temporal)
                .collect(),
        ),
        ..Default::default()
    };
    let ctx = SeedContext::new(7);
    let ladders = Ladders::default();

    let (manifest, stats) =
        build_benchmark(&entries, &ctx, &ladders, ProtocolConfig::default(), &root, &opts)
            .unwrap();
    println!("first run:  built {}, skipped {}", stats.built, stats.skipped);
    println!("manifest rows: {}", manifest.rows.len());

    let (_, stats) =
        build_benchmark(&entries, &ctx, &ladders, ProtocolConfig::default(), &root, &opts)
            .unwrap();
    println!("second run: built {}, skipped {}", stats.built, stats.skipped);

    let report = verify_benchmark(&root).unwrap();
    println!(
        "verify: checked {}, missing {}, corrupt {}",
        report.checked,
        report.missing.len(),
        report.corrupt.len()
    );
    println!("benchmark at {}", root.display());
}
