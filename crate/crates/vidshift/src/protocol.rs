//! Evaluation protocol: uniform temporal crops and center spatial crops.

use serde::{Deserialize, Serialize};

use crate::camera::resize_shorter_side;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// Multi-crop evaluation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n_temporal_crops: usize,
    pub clip_len: usize,
    pub frame_stride: usize,
    pub crop_size: u32,
}

impl ProtocolConfig {
    /// Named presets: 10 temporal crops (Kinetics style), 5 (UCF/HMDB
    /// style), 1 (SSv2 style).
    pub fn preset(name: &str) -> Result<ProtocolConfig> {
        let (n, clip_len, stride) = match name {
            "kinetics10" => (10, 8, 8),
            "ucf5" | "hmdb5" => (5, 8, 8),
            "ssv2-1" => (1, 16, 4),
            other => {
                return Err(Error::Parse(format!("unknown protocol preset {other:?}")))
            }
        };
        Ok(ProtocolConfig {
            n_temporal_crops: n,
            clip_len,
            frame_stride: stride,
            crop_size: 224,
        })
    }
}

impl Default for ProtocolConfig {
    fn default() -> ProtocolConfig {
        ProtocolConfig::preset("kinetics10").unwrap()
    }
}

/// Start index of each of `n` uniform temporal crops over a `t`-frame
/// video. Endpoint-inclusive spacing: the first crop starts at 0 and the
/// last at `t - span` whenever the video is long enough; a single crop is
/// centered. `span = (clip_len - 1) * stride + 1`.
pub fn temporal_crop_starts(t: usize, n: usize, clip_len: usize, stride: usize) -> Vec<usize> {
    assert!(t >= 1 && n >= 1 && clip_len >= 1 && stride >= 1);
    let span = (clip_len - 1) * stride + 1;
    let reach = t.saturating_sub(span);
    if n == 1 {
        return vec![reach / 2];
    }
    (0..n)
        .map(|i| ((i * reach) as f64 / (n - 1) as f64).round() as usize)
        .collect()
}

/// Frame indices of one temporal crop; reads past the end clamp to the
/// last frame.
pub fn crop_frame_indices(t: usize, start: usize, clip_len: usize, stride: usize) -> Vec<usize> {
    (0..clip_len).map(|i| (start + i * stride).min(t - 1)).collect()
}

/// Center `size`x`size` window. Frames smaller than `size` in either
/// dimension are first resized so the shorter side is 256.
pub fn center_crop(frame: &Frame, size: u32) -> Result<Frame> {
    let mut resized;
    let frame = if frame.height < size || frame.width < size {
        resized = resize_shorter_side(frame, 256);
        if resized.height < size || resized.width < size {
            return Err(Error::FrameTooSmall {
                width: resized.width,
                height: resized.height,
                min: size,
            });
        }
        &resized
    } else {
        frame
    };
    let y0 = (frame.height - size) / 2;
    let x0 = (frame.width - size) / 2;
    if y0 == 0 && x0 == 0 && frame.height == size && frame.width == size {
        return Ok(frame.clone());
    }
    let mut pixels = Vec::with_capacity((size * size * 3) as usize);
    for y in y0..y0 + size {
        let row = ((y * frame.width + x0) * 3) as usize;
        pixels.extend_from_slice(&frame.pixels[row..row + (size * 3) as usize]);
    }
    resized = Frame::new(size, size, pixels);
    Ok(resized)
}
