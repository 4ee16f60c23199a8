//! Deterministic video-robustness benchmark toolkit.
//!
//! The crate generates 90 perturbations (18 kinds at 5 severity levels,
//! grouped into Noise, Blur, Digital, Temporal, and Camera categories) from
//! clean clips, and scores model prediction logs with absolute (γᵃ) and
//! relative (γʳ) robustness metrics.
//!
//! Everything is reproducible from a single master seed: per-stream seeds
//! are derived from `(master_seed, video_id, kind, severity, frame)` so
//! outputs do not depend on worker count or scheduling. The only exception
//! is the MPEG pair, which shells out to an external encoder and is
//! reproducible at the PSNR level rather than bitwise.
//!
//! Start with the `examples/` directory; each example exercises one major
//! capability end to end. The `vidshift` binary wraps the same library
//! entry points:
//!
//! ```text
//! vidshift perturb --kind gaussian --severity 3 --seed 7 in/ out/
//! vidshift build-bench --test-list list.csv --seed 7 out_root/
//! vidshift score --predictions preds.csv --out scores.csv
//! vidshift report --scores scores.csv --out-dir report/
//! vidshift verify out_root/
//! vidshift dump-ladders
//! ```

pub mod apply;
pub mod bench;
pub mod camera;
pub mod clipio;
pub mod codec;
pub mod error;
pub mod frame;
pub mod ladder;
pub mod metrics;
pub mod photometric;
pub mod protocol;
pub mod report;
pub mod seed;
pub mod spec;
pub mod temporal;

pub use apply::{apply, Applied, ApplyOptions};
pub use bench::{build_benchmark, verify_benchmark, BenchManifest, BuildOptions, TestEntry};
pub use error::{Error, Result};
pub use frame::{Clip, Frame};
pub use ladder::Ladders;
pub use metrics::{accuracy, parse_prediction_log, score_models, ModelScores};
pub use protocol::ProtocolConfig;
pub use seed::SeedContext;
pub use spec::{enumerate_specs, Category, Kind, PerturbationSpec};
