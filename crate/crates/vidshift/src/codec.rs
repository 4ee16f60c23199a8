//! Digital compression perturbations: in-process JPEG round-trips and
//! clip-level MPEG1/MPEG2 round-trips through an external encoder.
//!
//! JPEG is bitwise reproducible. MPEG outputs depend on the encoder build
//! and are only PSNR-band reproducible; the exact argv of every encoder
//! invocation is recorded so runs stay auditable.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use crate::error::{Error, Result};
use crate::frame::{Clip, Frame};
use crate::spec::Kind;

/// Environment variable overriding the external encoder binary.
pub const ENCODER_ENV: &str = "VIDSHIFT_ENCODER";

/// Fixed encode frame rate; wall-clock timing is irrelevant, frame-count
/// preservation is the contract.
pub const ENCODE_FPS: u32 = 25;

/// Encode to JPEG (4:2:0 subsampling) at `quality` and decode back.
pub fn jpeg_roundtrip(frame: &Frame, quality: u8) -> Result<Frame> {
    let bytes = jpeg_encode(frame, quality)?;
    let decoded = image::load_from_memory_with_format(&bytes, image::ImageFormat::Jpeg)
        .map_err(|e| Error::CodecFailure(format!("jpeg decode: {e}")))?
        .to_rgb8();
    if decoded.width() != frame.width || decoded.height() != frame.height {
        return Err(Error::CodecFailure("jpeg round-trip changed dimensions".into()));
    }
    Ok(Frame::new(frame.height, frame.width, decoded.into_raw()))
}

/// Encode a frame to JPEG bytes. Exposed so tests can check encoded size
/// against the quality ladder.
pub fn jpeg_encode(frame: &Frame, quality: u8) -> Result<Vec<u8>> {
    if !(1..=100).contains(&quality) {
        return Err(Error::CodecFailure(format!("jpeg quality {quality} out of 1..=100")));
    }
    let mut bytes = Vec::new();
    let mut encoder = jpeg_encoder::Encoder::new(&mut bytes, quality);
    encoder.set_sampling_factor(jpeg_encoder::SamplingFactor::F_2_2);
    encoder
        .encode(
            &frame.pixels,
            frame.width as u16,
            frame.height as u16,
            jpeg_encoder::ColorType::Rgb,
        )
        .map_err(|e| Error::CodecFailure(format!("jpeg encode: {e}")))?;
    Ok(bytes)
}

/// Resolve the external encoder binary: `$VIDSHIFT_ENCODER` or `ffmpeg`.
pub fn encoder_binary() -> String {
    std::env::var(ENCODER_ENV).unwrap_or_else(|_| "ffmpeg".to_string())
}

/// True when the external encoder can be spawned.
pub fn encoder_available() -> bool {
    Command::new(encoder_binary())
        .arg("-version")
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

/// Record of one MPEG round-trip: container path plus the exact argv of
/// both encoder invocations.
#[derive(Debug, Clone)]
pub struct MpegArtifacts {
    pub container: PathBuf,
    pub encode_argv: Vec<String>,
    pub decode_argv: Vec<String>,
}

/// Target bitrate in bits/second: `fraction` of the raw-equivalent
/// reference bitrate of 0.5 bit/pixel/frame at the fixed fps.
pub fn target_bitrate(width: u32, height: u32, fraction: f64) -> u64 {
    assert!(fraction > 0.0 && fraction <= 1.0);
    let reference = 0.5 * width as f64 * height as f64 * ENCODE_FPS as f64;
    (reference * fraction).round().max(1.0) as u64
}

fn mpeg_codec_name(standard: Kind) -> Result<&'static str> {
    match standard {
        Kind::Mpeg1 => Ok("mpeg1video"),
        Kind::Mpeg2 => Ok("mpeg2video"),
        other => Err(Error::UnsupportedSpec(format!("{other} is not an MPEG standard"))),
    }
}

/// Argv for encoding a raw rgb24 pipe into the given container file.
pub fn encode_argv(standard: Kind, clip: &Clip, fraction: f64, out: &Path) -> Result<Vec<String>> {
    let codec = mpeg_codec_name(standard)?;
    let bitrate = target_bitrate(clip.width(), clip.height(), fraction);
    Ok(vec![
        "-y".into(),
        "-f".into(),
        "rawvideo".into(),
        "-pix_fmt".into(),
        "rgb24".into(),
        "-s".into(),
        format!("{}x{}", clip.width(), clip.height()),
        "-r".into(),
        ENCODE_FPS.to_string(),
        "-i".into(),
        "-".into(),
        "-c:v".into(),
        codec.into(),
        "-b:v".into(),
        bitrate.to_string(),
        "-frames:v".into(),
        clip.len().to_string(),
        "-f".into(),
        "mpegvideo".into(),
        out.to_string_lossy().into_owned(),
    ])
}

/// Argv for decoding the container back to a raw rgb24 pipe.
pub fn decode_argv(container: &Path) -> Vec<String> {
    vec![
        "-i".into(),
        container.to_string_lossy().into_owned(),
        "-f".into(),
        "rawvideo".into(),
        "-pix_fmt".into(),
        "rgb24".into(),
        "-".into(),
    ]
}

fn run_encoder(argv: &[String], stdin_data: Option<&[u8]>) -> Result<Vec<u8>> {
    let binary = encoder_binary();
    let mut cmd = Command::new(&binary);
    cmd.args(argv)
        .stdin(if stdin_data.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::EncoderNotFound(binary.clone())
        } else {
            Error::Io(e)
        }
    })?;
    if let Some(data) = stdin_data {
        // Feed stdin from a thread so a full stdout pipe cannot deadlock us.
        let mut stdin = child.stdin.take().unwrap();
        let data = data.to_vec();
        std::thread::spawn(move || {
            let _ = stdin.write_all(&data);
        });
    }
    let output = child.wait_with_output()?;
    if !output.status.success() {
        return Err(Error::EncoderFailure {
            status: output.status.code().unwrap_or(-1),
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    Ok(output.stdout)
}

/// Encode the clip at the given bitrate fraction, decode it back, and
/// return the perturbed clip plus the invocation record. The container
/// file is left in `scratch_dir`.
pub fn mpeg_roundtrip(
    clip: &Clip,
    standard: Kind,
    bitrate_fraction: f64,
    scratch_dir: &Path,
) -> Result<(Clip, MpegArtifacts)> {
    if !(0.0..=1.0).contains(&bitrate_fraction) || bitrate_fraction == 0.0 {
        return Err(Error::CodecFailure(format!(
            "bitrate fraction {bitrate_fraction} out of (0, 1]"
        )));
    }
    std::fs::create_dir_all(scratch_dir)?;
    let container = scratch_dir.join(format!("{}.{}", clip.id, "mpg"));
    let enc = encode_argv(standard, clip, bitrate_fraction, &container)?;
    let raw: Vec<u8> = clip.frames.iter().flat_map(|f| f.pixels.iter().copied()).collect();
    run_encoder(&enc, Some(&raw))?;

    let dec = decode_argv(&container);
    let decoded = run_encoder(&dec, None)?;
    let frame_bytes = (clip.width() * clip.height() * 3) as usize;
    if decoded.len() % frame_bytes != 0 {
        return Err(Error::CodecFailure(format!(
            "decoded byte count {} is not a whole number of frames",
            decoded.len()
        )));
    }
    let got = decoded.len() / frame_bytes;
    if got != clip.len() {
        return Err(Error::FrameCountMismatch { expected: clip.len(), got });
    }
    let frames = decoded
        .chunks_exact(frame_bytes)
        .map(|chunk| Frame::new(clip.height(), clip.width(), chunk.to_vec()))
        .collect();
    Ok((
        clip.with_frames(frames),
        MpegArtifacts { container, encode_argv: enc, decode_argv: dec },
    ))
}
