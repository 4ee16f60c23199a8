//! Clip I/O: numbered PNG frame directories, optional video-file decoding
//! through the external encoder, and the pixel checksum used by manifests.

use std::path::Path;
use std::process::{Command, Stdio};

use crate::codec::{encoder_binary, ENCODER_ENV};
use crate::error::{Error, Result};
use crate::frame::{Clip, Frame};

/// Checksum of raw decoded pixel bytes (not file bytes): 64-bit FNV-1a
/// over dimensions, frame count, and every frame buffer in order. PNG
/// encoders vary; pixel identity is the real contract.
pub fn pixel_checksum(clip: &Clip) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(&(clip.len() as u32).to_le_bytes());
    eat(&clip.height().to_le_bytes());
    eat(&clip.width().to_le_bytes());
    for f in &clip.frames {
        eat(&f.pixels);
    }
    h
}

fn frame_file_name(index: usize) -> String {
    format!("frame_{index:05}.png")
}

/// Write a clip as `frame_00000.png ...` under `dir`.
pub fn write_clip(clip: &Clip, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (i, frame) in clip.frames.iter().enumerate() {
        let path = dir.join(frame_file_name(i));
        image::save_buffer(
            &path,
            &frame.pixels,
            frame.width,
            frame.height,
            image::ExtendedColorType::Rgb8,
        )
        .map_err(|e| Error::DecodeFailure { path, reason: e.to_string() })?;
    }
    Ok(())
}

fn read_image_frame(path: &Path) -> Result<Frame> {
    let img = image::open(path)
        .map_err(|e| Error::DecodeFailure { path: path.to_path_buf(), reason: e.to_string() })?
        .to_rgb8();
    Ok(Frame::new(img.height(), img.width(), img.into_raw()))
}

const IMAGE_EXTS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];
const VIDEO_EXTS: [&str; 5] = ["mp4", "avi", "mkv", "mpg", "webm"];

/// Load a clip from a directory of image frames (sorted by file name) or,
/// when the path is a video file, by decoding it through the external
/// encoder binary.
pub fn read_clip(path: &Path, id: &str) -> Result<Clip> {
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .map(|e| IMAGE_EXTS.contains(&e.to_ascii_lowercase().as_str()))
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::DecodeFailure {
                path: path.to_path_buf(),
                reason: "no image frames found".into(),
            });
        }
        let frames = files.iter().map(|f| read_image_frame(f)).collect::<Result<Vec<_>>>()?;
        return Clip::new(id, frames);
    }
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    if VIDEO_EXTS.contains(&ext.as_str()) {
        return decode_video(path, id);
    }
    Err(Error::DecodeFailure {
        path: path.to_path_buf(),
        reason: format!("unsupported input (expected frame directory or {VIDEO_EXTS:?})"),
    })
}

fn decode_video(path: &Path, id: &str) -> Result<Clip> {
    let binary = encoder_binary();
    // Probe dimensions by decoding; rgb24 output is W*H*3 per frame, but we
    // need W and H first. Ask the decoder to print the stream info.
    let probe = Command::new(&binary)
        .args(["-i", &path.to_string_lossy()])
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .output()
        .map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::EncoderNotFound(format!("{binary} (set {ENCODER_ENV})"))
            } else {
                Error::Io(e)
            }
        })?;
    let info = String::from_utf8_lossy(&probe.stderr);
    let (w, h) = parse_dimensions(&info).ok_or_else(|| Error::DecodeFailure {
        path: path.to_path_buf(),
        reason: "could not determine video dimensions".into(),
    })?;
    let out = Command::new(&binary)
        .args(["-i", &path.to_string_lossy(), "-f", "rawvideo", "-pix_fmt", "rgb24", "-"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .output()?;
    if !out.status.success() {
        return Err(Error::DecodeFailure {
            path: path.to_path_buf(),
            reason: "decoder exited nonzero".into(),
        });
    }
    let frame_bytes = (w * h * 3) as usize;
    if out.stdout.is_empty() || out.stdout.len() % frame_bytes != 0 {
        return Err(Error::DecodeFailure {
            path: path.to_path_buf(),
            reason: format!("decoded {} bytes, not a multiple of {frame_bytes}", out.stdout.len()),
        });
    }
    let frames = out
        .stdout
        .chunks_exact(frame_bytes)
        .map(|c| Frame::new(h, w, c.to_vec()))
        .collect();
    Clip::new(id, frames)
}

// Pull "WxH" out of a decoder's stream-info stderr.
fn parse_dimensions(info: &str) -> Option<(u32, u32)> {
    for line in info.lines() {
        if !line.contains("Video:") {
            continue;
        }
        for token in line.split([' ', ',']) {
            if let Some((w, h)) = token.split_once('x') {
                if let (Ok(w), Ok(h)) = (w.parse::<u32>(), h.parse::<u32>()) {
                    if w >= 16 && h >= 16 {
                        return Some((w, h));
                    }
                }
            }
        }
    }
    None
}

/// Deterministic synthetic clip with per-frame structure, for tests,
/// examples, and dry runs.
pub fn synthetic_clip(id: &str, t: usize, height: u32, width: u32) -> Clip {
    let frames = (0..t)
        .map(|i| {
            let mut pixels = Vec::with_capacity((height * width * 3) as usize);
            for y in 0..height {
                for x in 0..width {
                    let phase = (i as u32 * 13) % 255;
                    pixels.extend_from_slice(&[
                        ((x * 255 / width) as u8).wrapping_add(phase as u8),
                        (y * 255 / height) as u8,
                        (((x + y + i as u32 * 7) * 128 / (width + height)) % 256) as u8,
                    ]);
                }
            }
            Frame::new(height, width, pixels)
        })
        .collect();
    Clip::new(id, frames).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_roundtrip_through_png_dir() {
        let clip = synthetic_clip("v1", 4, 32, 48);
        let dir = tempfile::tempdir().unwrap();
        write_clip(&clip, dir.path()).unwrap();
        let back = read_clip(dir.path(), "v1").unwrap();
        assert_eq!(back, clip);
        assert_eq!(pixel_checksum(&back), pixel_checksum(&clip));
    }

    #[test]
    fn checksum_changes_with_content() {
        let a = synthetic_clip("v", 3, 16, 16);
        let mut b = a.clone();
        b.frames[1].pixels[0] ^= 1;
        assert_ne!(pixel_checksum(&a), pixel_checksum(&b));
    }

    #[test]
    fn empty_dir_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(read_clip(dir.path(), "v").is_err());
    }

    #[test]
    fn dimension_parsing() {
        let info = "  Stream #0:0: Video: mpeg1video, yuv420p(tv), 224x224 [SAR 1:1], 25 fps";
        assert_eq!(parse_dimensions(info), Some((224, 224)));
        assert_eq!(parse_dimensions("no video line"), None);
    }
}
