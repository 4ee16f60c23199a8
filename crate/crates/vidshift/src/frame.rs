//! Frames and clips: the raster data every perturbation operates on.
//!
//! Pixel math happens in `f32` on intensities normalized to [0, 1].
//! Conversion back to 8-bit clamps and then rounds half away from zero,
//! so identical float results always quantize identically.

use crate::error::{Error, Result};

/// A single RGB frame, 8 bits per channel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub height: u32,
    pub width: u32,
    pub pixels: Vec<u8>,
}

impl Frame {
    pub fn new(height: u32, width: u32, pixels: Vec<u8>) -> Frame {
        assert!(height >= 1 && width >= 1, "frame dimensions must be >= 1");
        assert_eq!(
            pixels.len(),
            (height * width * 3) as usize,
            "pixel buffer length must be height * width * 3"
        );
        Frame { height, width, pixels }
    }

    /// Constant-color frame.
    pub fn filled(height: u32, width: u32, rgb: [u8; 3]) -> Frame {
        let mut pixels = Vec::with_capacity((height * width * 3) as usize);
        for _ in 0..height * width {
            pixels.extend_from_slice(&rgb);
        }
        Frame::new(height, width, pixels)
    }

    #[inline]
    pub fn get(&self, y: u32, x: u32) -> [u8; 3] {
        let i = ((y * self.width + x) * 3) as usize;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, y: u32, x: u32, rgb: [u8; 3]) {
        let i = ((y * self.width + x) * 3) as usize;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    /// Normalized float copy of the pixel buffer, values in [0, 1].
    pub fn to_f32(&self) -> Vec<f32> {
        self.pixels.iter().map(|&v| v as f32 / 255.0).collect()
    }

    /// Quantize a normalized float buffer back to a frame.
    pub fn from_f32(height: u32, width: u32, data: &[f32]) -> Frame {
        let pixels = data.iter().map(|&v| quantize(v)).collect();
        Frame::new(height, width, pixels)
    }
}

/// Clamp a normalized intensity to [0, 1] and round half away from zero
/// onto the 8-bit scale.
#[inline]
pub fn quantize(v: f32) -> u8 {
    let scaled = (v.clamp(0.0, 1.0) as f64) * 255.0;
    // Round half away from zero; values are non-negative after the clamp.
    (scaled + 0.5).floor() as u8
}

/// An ordered sequence of equally sized frames with an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clip {
    pub id: String,
    pub frames: Vec<Frame>,
}

impl Clip {
    pub fn new(id: impl Into<String>, frames: Vec<Frame>) -> Result<Clip> {
        if frames.is_empty() {
            return Err(Error::Parse("clip must contain at least one frame".into()));
        }
        let (h, w) = (frames[0].height, frames[0].width);
        if frames.iter().any(|f| f.height != h || f.width != w) {
            return Err(Error::Parse("all frames in a clip must share dimensions".into()));
        }
        Ok(Clip { id: id.into(), frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn height(&self) -> u32 {
        self.frames[0].height
    }

    pub fn width(&self) -> u32 {
        self.frames[0].width
    }

    /// Replace the frame buffer, keeping the id.
    pub fn with_frames(&self, frames: Vec<Frame>) -> Clip {
        Clip { id: self.id.clone(), frames }
    }
}

/// Peak signal-to-noise ratio between two equally sized frames, in dB.
pub fn psnr(a: &Frame, b: &Frame) -> f64 {
    assert_eq!(a.pixels.len(), b.pixels.len());
    let mse: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum::<f64>()
        / a.pixels.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    }
}

/// Mean PSNR across the frames of two clips.
pub fn clip_psnr(a: &Clip, b: &Clip) -> f64 {
    assert_eq!(a.len(), b.len());
    let sum: f64 = a.frames.iter().zip(&b.frames).map(|(x, y)| psnr(x, y)).sum();
    sum / a.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rounds_half_away_from_zero() {
        assert_eq!(quantize(0.0), 0);
        assert_eq!(quantize(1.0), 255);
        assert_eq!(quantize(-0.2), 0);
        assert_eq!(quantize(1.7), 255);
        // 0.5 / 255 * 255 = 127.5 -> 128
        assert_eq!(quantize(127.5 / 255.0), 128);
    }

    #[test]
    fn f32_roundtrip_is_identity() {
        let pixels: Vec<u8> = (0..=255).flat_map(|v| [v, v, v]).collect();
        let f = Frame::new(16, 16, pixels);
        let back = Frame::from_f32(16, 16, &f.to_f32());
        assert_eq!(f, back);
    }

    #[test]
    fn clip_rejects_mismatched_frames() {
        let a = Frame::filled(4, 4, [0, 0, 0]);
        let b = Frame::filled(4, 5, [0, 0, 0]);
        assert!(Clip::new("c", vec![a, b]).is_err());
    }

    #[test]
    fn psnr_identical_is_infinite() {
        let f = Frame::filled(8, 8, [10, 20, 30]);
        assert!(psnr(&f, &f).is_infinite());
    }
}
