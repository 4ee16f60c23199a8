use std::path::PathBuf;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported perturbation spec: {0}")]
    UnsupportedSpec(String),

    #[error("frame too small: {width}x{height}, need at least {min}x{min}")]
    FrameTooSmall { width: u32, height: u32, min: u32 },

    #[error("index map entry {index} out of range for clip of {len} frames")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("codec failure: {0}")]
    CodecFailure(String),

    #[error("encoder binary not found: {0}")]
    EncoderNotFound(String),

    #[error("encoder exited with {status}: {stderr}")]
    EncoderFailure { status: i32, stderr: String },

    #[error("decoded {got} frames, expected {expected}")]
    FrameCountMismatch { expected: usize, got: usize },

    #[error("inconsistent labels for video {video_id}: {a} vs {b}")]
    InconsistentLabels { video_id: String, a: u32, b: u32 },

    #[error("no prediction records for group {0}")]
    EmptyGroup(String),

    #[error("clean accuracy is zero; relative robustness undefined")]
    DivisionByZeroClean,

    #[error("incomplete score grid; missing cells: {}", .0.join(", "))]
    IncompleteGrid(Vec<String>),

    #[error("manifest conflict: {0}")]
    ManifestConflict(String),

    #[error("failed to decode {path}: {reason}")]
    DecodeFailure { path: PathBuf, reason: String },

    #[error("invalid severity ladder: {0}")]
    InvalidLadder(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
