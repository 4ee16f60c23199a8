//! Show the multi-crop evaluation protocol: uniform temporal crop starts
//! for each preset, and the spatial center crop.
//!
//! Run with: cargo run --example protocol_crops

use vidshift::clipio::synthetic_clip;
use vidshift::protocol::{center_crop, crop_frame_indices, temporal_crop_starts};
use vidshift::ProtocolConfig;

fn main() {
    let t = 100;
    for preset in ["kinetics10", "ucf5", "ssv2-1"] {
        let p = ProtocolConfig::preset(preset).unwrap();
        let starts = temporal_crop_starts(t, p.n_temporal_crops, p.clip_len, p.frame_stride);
        println!("{preset}: {} crops over {t} frames, starts {starts:?}", starts.len());
        let first = crop_frame_indices(t, starts[0], p.clip_len, p.frame_stride);
        println!("  first crop frame indices: {first:?}");
    }

    let clip = synthetic_clip("demo", 1, 240, 320);
    let cropped = center_crop(&clip.frames[0], 224).unwrap();
    println!(
        "center crop: {}x{} -> {}x{}",
        clip.width(),
        clip.height(),
        cropped.width,
        cropped.height
    );
}
