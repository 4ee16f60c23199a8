//! Per-frame noise and blur perturbations.
//!
//! All operators work on normalized [0, 1] intensities and quantize once
//! at the end, so identical (frame, params, seed) inputs give identical
//! output bytes.

use rand::RngExt;
use rand_distr::{Distribution, Normal, Poisson};

use crate::frame::{quantize, Frame};
use crate::seed::stream;

/// Additive i.i.d. gaussian noise with standard deviation `sigma`
/// (in [0, 1] intensity units), drawn per pixel-channel.
pub fn gaussian_noise(frame: &Frame, sigma: f64, seed: u64) -> Frame {
    assert!(sigma >= 0.0);
    if sigma == 0.0 {
        return frame.clone();
    }
    let mut rng = stream(seed);
    let normal = Normal::new(0.0, sigma).unwrap();
    let pixels = frame
        .pixels
        .iter()
        .map(|&v| quantize((v as f64 / 255.0 + normal.sample(&mut rng)) as f32))
        .collect();
    Frame::new(frame.height, frame.width, pixels)
}

/// Photon (shot) noise: each channel becomes `Poisson(x * lambda) / lambda`.
/// Smaller `lambda` means fewer photons and stronger noise.
pub fn shot_noise(frame: &Frame, lambda: f64, seed: u64) -> Frame {
    assert!(lambda > 0.0);
    let mut rng = stream(seed);
    let pixels = frame
        .pixels
        .iter()
        .map(|&v| {
            let mean = v as f64 / 255.0 * lambda;
            if mean == 0.0 {
                return 0;
            }
            let sample = Poisson::new(mean).unwrap().sample(&mut rng);
            quantize((sample / lambda) as f32)
        })
        .collect();
    Frame::new(frame.height, frame.width, pixels)
}

/// Salt-and-pepper impulse noise: each pixel is independently replaced
/// with probability `p`; a replacement sets all three channels to black
/// or white with equal probability.
pub fn impulse_noise(frame: &Frame, p: f64, seed: u64) -> Frame {
    assert!((0.0..=1.0).contains(&p));
    let mut rng = stream(seed);
    let mut out = frame.clone();
    for i in 0..(frame.height * frame.width) as usize {
        let u: f64 = rng.random_range(0.0..1.0);
        if u < p {
            let white: bool = rng.random_range(0.0..1.0) < 0.5;
            let v = if white { 255 } else { 0 };
            out.pixels[i * 3..i * 3 + 3].copy_from_slice(&[v, v, v]);
        }
    }
    out
}

/// Multiplicative speckle noise: `x * (1 + n)` with `n ~ Normal(0, sigma)`,
/// drawn per pixel-channel.
pub fn speckle_noise(frame: &Frame, sigma: f64, seed: u64) -> Frame {
    assert!(sigma >= 0.0);
    if sigma == 0.0 {
        return frame.clone();
    }
    let mut rng = stream(seed);
    let normal = Normal::new(0.0, sigma).unwrap();
    let pixels = frame
        .pixels
        .iter()
        .map(|&v| {
            let x = v as f64 / 255.0;
            quantize((x * (1.0 + normal.sample(&mut rng))) as f32)
        })
        .collect();
    Frame::new(frame.height, frame.width, pixels)
}

/// A square convolution kernel with odd side `2 * radius + 1`.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub radius: usize,
    pub weights: Vec<f64>,
}

impl Kernel {
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn weight(&self, dy: isize, dx: isize) -> f64 {
        let r = self.radius as isize;
        self.weights[((dy + r) * self.side() as isize + dx + r) as usize]
    }

    fn normalized(radius: usize, mut weights: Vec<f64>) -> Kernel {
        let sum: f64 = weights.iter().sum();
        assert!(sum > 0.0, "kernel must have positive mass");
        for w in &mut weights {
            *w /= sum;
        }
        Kernel { radius, weights }
    }
}

/// Uniform disk kernel: equal weight on every grid point within `radius`
/// of the center, normalized to unit sum.
pub fn disk_kernel(radius: usize) -> Kernel {
    assert!(radius >= 1);
    let r = radius as isize;
    let side = 2 * radius + 1;
    let mut weights = vec![0.0f64; side * side];
    for dy in -r..=r {
        for dx in -r..=r {
            if dy * dy + dx * dx <= r * r {
                weights[((dy + r) * side as isize + dx + r) as usize] = 1.0;
            }
        }
    }
    Kernel::normalized(radius, weights)
}

/// Gaussian-weighted line kernel of half-length `radius` at `angle`
/// degrees, built by bilinear splatting of the 1-D taps, normalized to
/// unit sum. At angle 0 the line is exactly the central row.
pub fn motion_kernel(radius: usize, sigma: f64, angle_deg: f64) -> Kernel {
    assert!(radius >= 1 && sigma > 0.0);
    let r = radius as isize;
    let side = 2 * radius + 1;
    let mut weights = vec![0.0f64; side * side];
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    for i in -r..=r {
        let w = (-((i * i) as f64) / (2.0 * sigma * sigma)).exp();
        let x = i as f64 * cos;
        let y = i as f64 * sin;
        // Bilinear splat onto the four surrounding grid points.
        let (x0, y0) = (x.floor(), y.floor());
        let (fx, fy) = (x - x0, y - y0);
        for (gy, gx, share) in [
            (y0, x0, (1.0 - fy) * (1.0 - fx)),
            (y0, x0 + 1.0, (1.0 - fy) * fx),
            (y0 + 1.0, x0, fy * (1.0 - fx)),
            (y0 + 1.0, x0 + 1.0, fy * fx),
        ] {
            if share == 0.0 {
                continue;
            }
            let (gy, gx) = (gy as isize, gx as isize);
            if gy.abs() <= r && gx.abs() <= r {
                weights[((gy + r) * side as isize + gx + r) as usize] += w * share;
            }
        }
    }
    Kernel::normalized(radius, weights)
}

/// Convolve with edge replication at the borders.
pub fn convolve(frame: &Frame, kernel: &Kernel) -> Frame {
    let (h, w) = (frame.height as isize, frame.width as isize);
    let input = frame.to_f32();
    let r = kernel.radius as isize;
    let mut out = vec![0.0f32; input.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0f64; 3];
            for dy in -r..=r {
                for dx in -r..=r {
                    let weight = kernel.weight(dy, dx);
                    if weight == 0.0 {
                        continue;
                    }
                    let sy = (y + dy).clamp(0, h - 1);
                    let sx = (x + dx).clamp(0, w - 1);
                    let base = ((sy * w + sx) * 3) as usize;
                    acc[0] += weight * input[base] as f64;
                    acc[1] += weight * input[base + 1] as f64;
                    acc[2] += weight * input[base + 2] as f64;
                }
            }
            let base = ((y * w + x) * 3) as usize;
            out[base] = acc[0] as f32;
            out[base + 1] = acc[1] as f32;
            out[base + 2] = acc[2] as f32;
        }
    }
    Frame::from_f32(frame.height, frame.width, &out)
}

/// Out-of-focus blur: convolution with a normalized disk.
pub fn defocus_blur(frame: &Frame, radius: usize) -> Frame {
    convolve(frame, &disk_kernel(radius))
}

/// Linear camera-sweep blur along `angle_deg`. The caller draws the angle
/// once per clip so all frames share the sweep direction.
pub fn motion_blur(frame: &Frame, radius: usize, sigma: f64, angle_deg: f64) -> Frame {
    convolve(frame, &motion_kernel(radius, sigma, angle_deg))
}

/// Draw the per-clip motion-blur angle, uniform in [0, 180) degrees.
pub fn motion_blur_angle(seed: u64) -> f64 {
    stream(seed).random_range(0.0..180.0)
}

/// Bilinear resize with pixel-center alignment and edge clamping.
/// Shared by zoom blur and the camera-motion module.
pub(crate) fn resize_bilinear(frame: &Frame, out_h: u32, out_w: u32) -> Frame {
    let input = frame.to_f32();
    let (h, w) = (frame.height as f64, frame.width as f64);
    let scale_y = h / out_h as f64;
    let scale_x = w / out_w as f64;
    let mut out = vec![0.0f32; (out_h * out_w * 3) as usize];
    for y in 0..out_h {
        let sy = ((y as f64 + 0.5) * scale_y - 0.5).clamp(0.0, h - 1.0);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(frame.height as usize - 1);
        let fy = (sy - y0 as f64) as f32;
        for x in 0..out_w {
            let sx = ((x as f64 + 0.5) * scale_x - 0.5).clamp(0.0, w - 1.0);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(frame.width as usize - 1);
            let fx = (sx - x0 as f64) as f32;
            let base = ((y * out_w + x) * 3) as usize;
            for c in 0..3 {
                let p00 = input[(y0 * frame.width as usize + x0) * 3 + c];
                let p01 = input[(y0 * frame.width as usize + x1) * 3 + c];
                let p10 = input[(y1 * frame.width as usize + x0) * 3 + c];
                let p11 = input[(y1 * frame.width as usize + x1) * 3 + c];
                out[base + c] = p00 * (1.0 - fy) * (1.0 - fx)
                    + p01 * (1.0 - fy) * fx
                    + p10 * fy * (1.0 - fx)
                    + p11 * fy * fx;
            }
        }
    }
    Frame::from_f32(out_h, out_w, &out)
}

fn center_zoom(input: &[f32], h: u32, w: u32, z: f64) -> Vec<f32> {
    let ch = ((h as f64 / z).round() as u32).clamp(1, h);
    let cw = ((w as f64 / z).round() as u32).clamp(1, w);
    let y0 = (h - ch) / 2;
    let x0 = (w - cw) / 2;
    // Crop then bilinear-resize back to (h, w), all in float.
    let mut crop = vec![0.0f32; (ch * cw * 3) as usize];
    for y in 0..ch {
        let src = (((y + y0) * w + x0) * 3) as usize;
        let dst = (y * cw * 3) as usize;
        crop[dst..dst + (cw * 3) as usize].copy_from_slice(&input[src..src + (cw * 3) as usize]);
    }
    let scale_y = ch as f64 / h as f64;
    let scale_x = cw as f64 / w as f64;
    let mut out = vec![0.0f32; (h * w * 3) as usize];
    for y in 0..h {
        let sy = ((y as f64 + 0.5) * scale_y - 0.5).clamp(0.0, ch as f64 - 1.0);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(ch as usize - 1);
        let fy = (sy - y0 as f64) as f32;
        for x in 0..w {
            let sx = ((x as f64 + 0.5) * scale_x - 0.5).clamp(0.0, cw as f64 - 1.0);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(cw as usize - 1);
            let fx = (sx - x0 as f64) as f32;
            let base = ((y * w + x) * 3) as usize;
            for c in 0..3 {
                let p00 = crop[(y0 * cw as usize + x0) * 3 + c];
                let p01 = crop[(y0 * cw as usize + x1) * 3 + c];
                let p10 = crop[(y1 * cw as usize + x0) * 3 + c];
                let p11 = crop[(y1 * cw as usize + x1) * 3 + c];
                out[base + c] = p00 * (1.0 - fy) * (1.0 - fx)
                    + p01 * (1.0 - fy) * fx
                    + p10 * fy * (1.0 - fx)
                    + p11 * fy * fx;
            }
        }
    }
    out
}

/// Number of zoomed copies averaged into a zoom blur.
pub fn zoom_step_count(max_zoom: f64, step: f64) -> usize {
    assert!(max_zoom > 1.0 && step > 0.0 && step < max_zoom - 1.0 + 1e-12);
    ((max_zoom - 1.0) / step + 1e-9).floor() as usize
}

/// Rushing-camera blur: the mean of the original frame and center-zoomed
/// copies at factors `1 + step, 1 + 2*step, ..., <= max_zoom`.
pub fn zoom_blur(frame: &Frame, max_zoom: f64, step: f64) -> Frame {
    let k = zoom_step_count(max_zoom, step);
    let input = frame.to_f32();
    let mut acc = input.clone();
    for i in 1..=k {
        let z = 1.0 + i as f64 * step;
        let zoomed = center_zoom(&input, frame.height, frame.width, z);
        for (a, v) in acc.iter_mut().zip(zoomed) {
            *a += v;
        }
    }
    let n = (k + 1) as f32;
    for a in &mut acc {
        *a /= n;
    }
    Frame::from_f32(frame.height, frame.width, &acc)
}
