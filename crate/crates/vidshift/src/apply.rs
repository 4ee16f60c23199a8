//! Dispatch: apply any perturbation spec to a clip.

use std::path::PathBuf;

use crate::camera;
use crate::codec::{self, MpegArtifacts};
use crate::error::Result;
use crate::frame::Clip;
use crate::ladder::{Ladders, Params};
use crate::photometric;
use crate::seed::SeedContext;
use crate::spec::PerturbationSpec;
use crate::temporal::{self, FrameIndexMap};

/// Knobs that do not belong to the spec itself.
#[derive(Debug, Clone, Default)]
pub struct ApplyOptions {
    /// Reuse the frame-0 noise stream for every frame (temporally
    /// consistent noise) instead of redrawing per frame.
    pub consistent_noise: bool,
    /// Scratch directory for external-encoder round-trips. Defaults to a
    /// fresh temp directory next to nothing in particular.
    pub scratch_dir: Option<PathBuf>,
}

/// The result of applying one spec: the perturbed clip plus whichever
/// side artifacts the kind produces.
#[derive(Debug, Clone)]
pub struct Applied {
    pub clip: Clip,
    /// Present for temporal kinds: the full description of the perturbation.
    pub index_map: Option<FrameIndexMap>,
    /// Present for MPEG kinds: container path and encoder invocations.
    pub mpeg: Option<MpegArtifacts>,
}

impl Applied {
    fn plain(clip: Clip) -> Applied {
        Applied { clip, index_map: None, mpeg: None }
    }
}

/// Apply `spec` to `clip`. Deterministic given (spec, clip, ctx, ladders):
/// all randomness derives from `ctx`, never from global state.
pub fn apply(
    spec: PerturbationSpec,
    clip: &Clip,
    ctx: &SeedContext,
    ladders: &Ladders,
    opts: &ApplyOptions,
) -> Result<Applied> {
    let kind = spec.kind;
    let sev = spec.severity;
    let clip_seed = ctx.derive_seed(&clip.id, kind, sev, None);
    let frame_seed = |t: u32| {
        let idx = if opts.consistent_noise { 0 } else { t };
        ctx.derive_seed(&clip.id, kind, sev, Some(idx))
    };
    let per_frame = |f: &dyn Fn(&crate::frame::Frame, u64) -> crate::frame::Frame| {
        let frames = clip
            .frames
            .iter()
            .enumerate()
            .map(|(t, frame)| f(frame, frame_seed(t as u32)))
            .collect();
        clip.with_frames(frames)
    };

    let applied = match ladders.params(kind, sev)? {
        Params::Gaussian { sigma } => {
            Applied::plain(per_frame(&|f, s| photometric::gaussian_noise(f, sigma, s)))
        }
        Params::Shot { lambda } => {
            Applied::plain(per_frame(&|f, s| photometric::shot_noise(f, lambda, s)))
        }
        Params::Impulse { p } => {
            Applied::plain(per_frame(&|f, s| photometric::impulse_noise(f, p, s)))
        }
        Params::Speckle { sigma } => {
            Applied::plain(per_frame(&|f, s| photometric::speckle_noise(f, sigma, s)))
        }
        Params::Defocus { radius } => {
            let frames = clip
                .frames
                .iter()
                .map(|f| photometric::defocus_blur(f, radius as usize))
                .collect();
            Applied::plain(clip.with_frames(frames))
        }
        Params::Motion { radius, sigma } => {
            // One sweep direction per clip, shared by all frames.
            let angle = photometric::motion_blur_angle(clip_seed);
            let frames = clip
                .frames
                .iter()
                .map(|f| photometric::motion_blur(f, radius as usize, sigma, angle))
                .collect();
            Applied::plain(clip.with_frames(frames))
        }
        Params::Zoom { max_zoom, step } => {
            let frames = clip
                .frames
                .iter()
                .map(|f| photometric::zoom_blur(f, max_zoom, step))
                .collect();
            Applied::plain(clip.with_frames(frames))
        }
        Params::Jpeg { quality } => {
            let frames = clip
                .frames
                .iter()
                .map(|f| codec::jpeg_roundtrip(f, quality))
                .collect::<Result<Vec<_>>>()?;
            Applied::plain(clip.with_frames(frames))
        }
        Params::Mpeg { bitrate_fraction } => {
            let scratch = match &opts.scratch_dir {
                Some(dir) => dir.clone(),
                None => std::env::temp_dir().join(format!("vidshift-{}", clip.id)),
            };
            let (out, artifacts) = codec::mpeg_roundtrip(clip, kind, bitrate_fraction, &scratch)?;
            Applied { clip: out, index_map: None, mpeg: Some(artifacts) }
        }
        Params::Sampling { k } => temporal_applied(clip, temporal::sampling_map(clip.len(), k as usize))?,
        Params::Reversal { k } => temporal_applied(clip, temporal::reversal_map(clip.len(), k as usize))?,
        Params::Jumbling { m } => {
            temporal_applied(clip, temporal::jumbling_map(clip.len(), m as usize, clip_seed))?
        }
        Params::BoxJumbling { m } => {
            temporal_applied(clip, temporal::box_jumbling_map(clip.len(), m as usize, clip_seed))?
        }
        Params::Freezing { p } => {
            temporal_applied(clip, temporal::freezing_map(clip.len(), p, clip_seed))?
        }
        Params::StaticRotation { degrees } => {
            Applied::plain(camera::static_rotation(clip, degrees))
        }
        Params::RandomRotation { bound } => {
            Applied::plain(camera::random_rotation(clip, bound, frame_seed))
        }
        Params::Translation { jitter } => {
            Applied::plain(camera::translation_crop(clip, jitter, frame_seed)?)
        }
    };
    Ok(applied)
}

fn temporal_applied(clip: &Clip, map: FrameIndexMap) -> Result<Applied> {
    let out = temporal::apply_index_map(clip, &map)?;
    Ok(Applied { clip: out, index_map: Some(map), mpeg: None })
}
