//! Camera-motion perturbations: rotations and jittered translation crops.

use rand::RngExt;

use crate::error::{Error, Result};
use crate::frame::{Clip, Frame};
use crate::photometric::resize_bilinear;
use crate::seed::stream;

pub const RESIZE_SIZE: u32 = 256;
pub const CROP_SIZE: u32 = 224;

/// Rotate one frame about its center by `degrees` (counterclockwise),
/// bilinear resampling, black fill outside the source. Multiples of 90
/// degrees on square frames take an exact pixel-permutation path.
pub fn rotate_frame(frame: &Frame, degrees: f64) -> Frame {
    let quarter_turns = degrees / 90.0;
    if quarter_turns.fract() == 0.0 {
        let turns = (quarter_turns as i64).rem_euclid(4) as u32;
        if turns == 0 {
            return frame.clone();
        }
        if frame.height == frame.width || turns == 2 {
            return rotate_exact(frame, turns);
        }
    }
    rotate_bilinear(frame, degrees)
}

// Exact quarter-turn permutation, matching the inverse mapping used by
// the bilinear path so the two agree at multiples of 90 degrees.
fn rotate_exact(frame: &Frame, turns: u32) -> Frame {
    let (h, w) = (frame.height, frame.width);
    let mut out = Frame::filled(h, w, [0, 0, 0]);
    for y in 0..h {
        for x in 0..w {
            let src = match turns {
                1 => frame.get(h - 1 - x, y),
                2 => frame.get(h - 1 - y, w - 1 - x),
                3 => frame.get(x, w - 1 - y),
                _ => unreachable!(),
            };
            out.set(y, x, src);
        }
    }
    out
}

fn rotate_bilinear(frame: &Frame, degrees: f64) -> Frame {
    let (h, w) = (frame.height as usize, frame.width as usize);
    let input = frame.to_f32();
    let cy = (h as f64 - 1.0) / 2.0;
    let cx = (w as f64 - 1.0) / 2.0;
    let (sin, cos) = degrees.to_radians().sin_cos();
    let mut out = vec![0.0f32; input.len()];
    for y in 0..h {
        for x in 0..w {
            // Inverse mapping: rotate the output position by -degrees.
            let dy = y as f64 - cy;
            let dx = x as f64 - cx;
            let sy = cy + dy * cos - dx * sin;
            let sx = cx + dy * sin + dx * cos;
            if sy < 0.0 || sx < 0.0 || sy > (h - 1) as f64 || sx > (w - 1) as f64 {
                continue; // black fill
            }
            let y0 = sy.floor() as usize;
            let x0 = sx.floor() as usize;
            let y1 = (y0 + 1).min(h - 1);
            let x1 = (x0 + 1).min(w - 1);
            let fy = (sy - y0 as f64) as f32;
            let fx = (sx - x0 as f64) as f32;
            let base = (y * w + x) * 3;
            for c in 0..3 {
                let p00 = input[(y0 * w + x0) * 3 + c];
                let p01 = input[(y0 * w + x1) * 3 + c];
                let p10 = input[(y1 * w + x0) * 3 + c];
                let p11 = input[(y1 * w + x1) * 3 + c];
                out[base + c] = p00 * (1.0 - fy) * (1.0 - fx)
                    + p01 * (1.0 - fy) * fx
                    + p10 * fy * (1.0 - fx)
                    + p11 * fy * fx;
            }
        }
    }
    Frame::from_f32(frame.height, frame.width, &out)
}

/// Rotate every frame by the same angle.
pub fn static_rotation(clip: &Clip, degrees: f64) -> Clip {
    let frames = clip.frames.iter().map(|f| rotate_frame(f, degrees)).collect();
    clip.with_frames(frames)
}

/// The angle applied to frame `t`, uniform in [-bound, bound] from the
/// per-frame seed. Exposed so tests can check the stream statistics.
pub fn random_rotation_angle(bound: f64, frame_seed: u64) -> f64 {
    if bound == 0.0 {
        return 0.0;
    }
    stream(frame_seed).random_range(-bound..=bound)
}

/// Rotate each frame by its own random angle; `frame_seed` yields the
/// per-frame stream seeds.
pub fn random_rotation(clip: &Clip, bound: f64, frame_seed: impl Fn(u32) -> u64) -> Clip {
    assert!(bound >= 0.0);
    let frames = clip
        .frames
        .iter()
        .enumerate()
        .map(|(t, f)| rotate_frame(f, random_rotation_angle(bound, frame_seed(t as u32))))
        .collect();
    clip.with_frames(frames)
}

/// Scale so the shorter side equals `target`, preserving aspect ratio.
pub fn resize_shorter_side(frame: &Frame, target: u32) -> Frame {
    let (h, w) = (frame.height, frame.width);
    if h.min(w) == target {
        return frame.clone();
    }
    let (out_h, out_w) = if h <= w {
        let out_w = ((w as f64) * target as f64 / h as f64).round().max(1.0) as u32;
        (target, out_w)
    } else {
        let out_h = ((h as f64) * target as f64 / w as f64).round().max(1.0) as u32;
        (out_h, target)
    };
    resize_bilinear(frame, out_h, out_w)
}

/// Resize shorter side to `RESIZE_SIZE` and take the center square.
pub fn resize_center_square(frame: &Frame) -> Frame {
    let resized = resize_shorter_side(frame, RESIZE_SIZE);
    let y0 = (resized.height - RESIZE_SIZE) / 2;
    let x0 = (resized.width - RESIZE_SIZE) / 2;
    let mut pixels = Vec::with_capacity((RESIZE_SIZE * RESIZE_SIZE * 3) as usize);
    for y in y0..y0 + RESIZE_SIZE {
        let row = ((y * resized.width + x0) * 3) as usize;
        pixels.extend_from_slice(&resized.pixels[row..row + (RESIZE_SIZE * 3) as usize]);
    }
    Frame::new(RESIZE_SIZE, RESIZE_SIZE, pixels)
}

/// The integer (dy, dx) crop-center displacement for frame `t`.
pub fn translation_offset(jitter: u32, frame_seed: u64) -> (i32, i32) {
    if jitter == 0 {
        return (0, 0);
    }
    let j = jitter as i32;
    let mut rng = stream(frame_seed);
    let dy = rng.random_range(-j..=j);
    let dx = rng.random_range(-j..=j);
    (dy, dx)
}

/// Crop a verbatim `CROP_SIZE` square window out of one 256x256 frame,
/// centered at the image center displaced by (dy, dx).
fn crop_window(frame: &Frame, dy: i32, dx: i32) -> Frame {
    let margin = ((RESIZE_SIZE - CROP_SIZE) / 2) as i32;
    let y0 = (margin + dy) as u32;
    let x0 = (margin + dx) as u32;
    let mut pixels = Vec::with_capacity((CROP_SIZE * CROP_SIZE * 3) as usize);
    for y in y0..y0 + CROP_SIZE {
        let row = ((y * frame.width + x0) * 3) as usize;
        pixels.extend_from_slice(&frame.pixels[row..row + (CROP_SIZE * 3) as usize]);
    }
    Frame::new(CROP_SIZE, CROP_SIZE, pixels)
}

/// Jittered translation crop: each frame is resized to a 256x256 square
/// and cropped to 224x224 at an independently displaced center.
pub fn translation_crop(
    clip: &Clip,
    jitter: u32,
    frame_seed: impl Fn(u32) -> u64,
) -> Result<Clip> {
    let max_jitter = (RESIZE_SIZE - CROP_SIZE) / 2;
    if jitter > max_jitter {
        return Err(Error::Parse(format!(
            "translation jitter {jitter} exceeds crop margin {max_jitter}"
        )));
    }
    if clip.height() < 1 || clip.width() < 1 {
        return Err(Error::FrameTooSmall { width: clip.width(), height: clip.height(), min: 1 });
    }
    let frames = clip
        .frames
        .iter()
        .enumerate()
        .map(|(t, f)| {
            let square = resize_center_square(f);
            let (dy, dx) = translation_offset(jitter, frame_seed(t as u32));
            crop_window(&square, dy, dx)
        })
        .collect();
    Ok(clip.with_frames(frames))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(h: u32, w: u32) -> Frame {
        let pixels = (0..h * w * 3).map(|i| (i * 31 % 251) as u8).collect();
        Frame::new(h, w, pixels)
    }

    fn smooth(h: u32, w: u32) -> Frame {
        let mut pixels = Vec::with_capacity((h * w * 3) as usize);
        for y in 0..h {
            for x in 0..w {
                pixels.extend_from_slice(&[
                    (x * 255 / w) as u8,
                    (y * 255 / h) as u8,
                    ((x + y) * 255 / (h + w)) as u8,
                ]);
            }
        }
        Frame::new(h, w, pixels)
    }

    #[test]
    fn zero_rotation_is_identity() {
        let f = pattern(32, 32);
        assert_eq!(rotate_frame(&f, 0.0), f);
    }

    #[test]
    fn four_quarter_turns_identity() {
        let f = pattern(64, 64);
        let mut r = f.clone();
        for _ in 0..4 {
            r = rotate_frame(&r, 90.0);
        }
        assert_eq!(r, f);
    }

    #[test]
    fn quarter_turn_is_exact_permutation() {
        let f = pattern(16, 16);
        let r = rotate_frame(&f, 90.0);
        let mut a: Vec<[u8; 3]> = Vec::new();
        let mut b: Vec<[u8; 3]> = Vec::new();
        for y in 0..16 {
            for x in 0..16 {
                a.push(f.get(y, x));
                b.push(r.get(y, x));
            }
        }
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        // A quarter turn moves the bottom-left corner to the top-left.
        assert_eq!(r.get(0, 0), f.get(15, 0));
    }

    #[test]
    fn rotation_composes_with_negative_rotation() {
        let f = smooth(64, 64);
        let there = rotate_frame(&f, 30.0);
        let back = rotate_frame(&there, -30.0);
        // Interior region: margin wide enough to exclude fill effects.
        for y in 20..44 {
            for x in 20..44 {
                let a = f.get(y, x);
                let b = back.get(y, x);
                for c in 0..3 {
                    assert!(
                        (a[c] as i32 - b[c] as i32).abs() <= 2,
                        "at {y},{x},{c}: {} vs {}",
                        a[c],
                        b[c]
                    );
                }
            }
        }
    }

    #[test]
    fn random_rotation_zero_bound_identity() {
        let f = pattern(32, 32);
        let clip = Clip::new("c", vec![f.clone(), f.clone()]).unwrap();
        let out = random_rotation(&clip, 0.0, |t| t as u64);
        assert_eq!(out, clip);
    }

    #[test]
    fn random_rotation_angle_statistics() {
        let n = 1000;
        let angles: Vec<f64> = (0..n).map(|t| random_rotation_angle(30.0, t)).collect();
        let mean = angles.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 3.0, "mean {mean}");
        assert!(angles.iter().all(|a| (-30.0..=30.0).contains(a)));
        assert!(angles.iter().any(|&a| a < -15.0));
        assert!(angles.iter().any(|&a| a > 15.0));
    }

    #[test]
    fn translation_zero_jitter_is_center_crop() {
        let f = pattern(256, 256);
        let clip = Clip::new("c", vec![f.clone()]).unwrap();
        let out = translation_crop(&clip, 0, |_| 7).unwrap();
        let expect = crop_window(&f, 0, 0);
        assert_eq!(out.frames[0], expect);
    }

    #[test]
    fn translation_output_is_verbatim_subwindow() {
        let f = smooth(240, 320);
        let clip = Clip::new("c", vec![f; 5]).unwrap();
        let out = translation_crop(&clip, 16, |t| 1000 + t as u64).unwrap();
        let square = resize_center_square(&clip.frames[0]);
        for frame in &out.frames {
            assert_eq!((frame.height, frame.width), (224, 224));
            // Exhaustive sub-window search over all 33x33 placements.
            let mut found = false;
            'search: for dy in -16i32..=16 {
                for dx in -16i32..=16 {
                    if crop_window(&square, dy, dx) == *frame {
                        found = true;
                        break 'search;
                    }
                }
            }
            assert!(found, "output frame is not a sub-window of the resized source");
        }
    }

    #[test]
    fn translation_offsets_deterministic() {
        assert_eq!(translation_offset(16, 99), translation_offset(16, 99));
        let clip = Clip::new("c", vec![pattern(256, 256); 3]).unwrap();
        let a = translation_crop(&clip, 16, |t| 50 + t as u64).unwrap();
        let b = translation_crop(&clip, 16, |t| 50 + t as u64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn translation_rejects_oversized_jitter() {
        let clip = Clip::new("c", vec![pattern(256, 256)]).unwrap();
        assert!(translation_crop(&clip, 17, |_| 0).is_err());
    }

    #[test]
    fn operations_preserve_frame_count() {
        let clip = Clip::new("c", vec![pattern(64, 64); 7]).unwrap();
        assert_eq!(static_rotation(&clip, 45.0).len(), 7);
        assert_eq!(random_rotation(&clip, 30.0, |t| t as u64).len(), 7);
        assert_eq!(translation_crop(&clip, 8, |t| t as u64).unwrap().len(), 7);
    }

    #[test]
    fn resize_shorter_side_dimensions() {
        let f = pattern(120, 160);
        let r = resize_shorter_side(&f, 256);
        assert_eq!(r.height, 256);
        assert_eq!(r.width, 341);
        let sq = resize_center_square(&f);
        assert_eq!((sq.height, sq.width), (256, 256));
    }
}
