//! Score a synthetic prediction log and print the markdown report tables.
//!
//! The log simulates a classifier that is always right on clean videos and
//! degrades with severity, so the resulting robustness scores have an
//! obvious shape.
//!
//! Run with: cargo run --example score_predictions

use std::fmt::Write as _;

use vidshift::report::markdown_report;
use vidshift::{accuracy, enumerate_specs, parse_prediction_log, score_models};

fn main() {
    let n_videos = 20;
    let mut log = String::from("video_id,model,perturbation,severity,crop_id,true_label,pred\n");
    for v in 0..n_videos {
        writeln!(log, "v{v},demo,clean,0,0,{},{}", v % 4, v % 4).unwrap();
    }
    for spec in enumerate_specs() {
        for v in 0..n_videos {
            // accuracy falls by 10 points per severity step
            let correct = v >= 2 * spec.severity as usize;
            let truth = v % 4;
            let pred = if correct { truth } else { (truth + 1) % 4 };
            writeln!(
                log,
                "v{v},demo,{},{},0,{truth},{pred}",
                spec.kind, spec.severity
            )
            .unwrap();
        }
    }

    let records = parse_prediction_log(log.as_bytes()).unwrap();
    let table = accuracy(&records).unwrap();
    let models = score_models(&table, false).unwrap();
    println!("clean accuracy: {:.1}%", models[0].clean_accuracy);
    println!("{}", markdown_report(&models));
}
