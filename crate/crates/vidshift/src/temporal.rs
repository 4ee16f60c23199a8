//! Temporal perturbations as pure index maps over frame positions.
//!
//! Every temporal perturbation is fully described by a length-preserving
//! map from output frame position to source frame index. Maps persist as
//! one plain-text line per clip so a perturbed clip can be reproduced
//! from the clean frames without storing pixels twice.

use rand::RngExt;

use crate::error::{Error, Result};
use crate::frame::Clip;
use crate::seed::stream;
use crate::spec::Kind;

/// Length-preserving map from output position to source frame index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameIndexMap {
    pub indices: Vec<usize>,
}

impl FrameIndexMap {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Serialize as `video_id kind severity T idx_0 ... idx_{T-1}`.
    pub fn to_line(&self, video_id: &str, kind: Kind, severity: u8) -> String {
        let mut line = format!("{video_id} {kind} {severity} {}", self.len());
        for i in &self.indices {
            line.push(' ');
            line.push_str(&i.to_string());
        }
        line
    }

    /// Parse a line produced by [`FrameIndexMap::to_line`]. Returns the
    /// identity fields alongside the map; rejects length mismatches.
    pub fn from_line(line: &str) -> Result<(String, Kind, u8, FrameIndexMap)> {
        let mut fields = line.split_whitespace();
        let video_id = fields
            .next()
            .ok_or_else(|| Error::Parse("empty index-map line".into()))?
            .to_string();
        let kind: Kind = fields
            .next()
            .ok_or_else(|| Error::Parse("index-map line missing kind".into()))?
            .parse()?;
        let severity: u8 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("index-map line missing severity".into()))?;
        let t: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("index-map line missing length".into()))?;
        let indices: Vec<usize> = fields
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad index {s:?}")))
            })
            .collect::<Result<_>>()?;
        if indices.len() != t {
            return Err(Error::Parse(format!(
                "index-map length mismatch: declared {t}, got {}",
                indices.len()
            )));
        }
        Ok((video_id, kind, severity, FrameIndexMap { indices }))
    }
}

/// Skip-frame sampling: `indices[j] = min(j * k, T - 1)`.
pub fn sampling_map(t: usize, k: usize) -> FrameIndexMap {
    assert!(t >= 1 && k >= 1);
    FrameIndexMap {
        indices: (0..t).map(|j| (j * k).min(t - 1)).collect(),
    }
}

/// Reversed skip-frame sampling.
pub fn reversal_map(t: usize, k: usize) -> FrameIndexMap {
    let mut map = sampling_map(t, k);
    map.indices.reverse();
    map
}

// Seeded Fisher-Yates so permutations reproduce across implementations.
fn shuffle<T>(items: &mut [T], rng: &mut impl RngExt) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// Shuffle frames within consecutive segments of length `m`.
pub fn jumbling_map(t: usize, m: usize, seed: u64) -> FrameIndexMap {
    assert!(t >= 1 && m >= 1);
    let mut rng = stream(seed);
    let mut indices: Vec<usize> = (0..t).collect();
    for segment in indices.chunks_mut(m) {
        shuffle(segment, &mut rng);
    }
    FrameIndexMap { indices }
}

/// Shuffle the order of length-`m` segments, keeping frame order inside each.
pub fn box_jumbling_map(t: usize, m: usize, seed: u64) -> FrameIndexMap {
    assert!(t >= 1 && m >= 1);
    let mut rng = stream(seed);
    let segments: Vec<Vec<usize>> = (0..t)
        .collect::<Vec<usize>>()
        .chunks(m)
        .map(|c| c.to_vec())
        .collect();
    let mut order: Vec<usize> = (0..segments.len()).collect();
    shuffle(&mut order, &mut rng);
    let indices = order.into_iter().flat_map(|s| segments[s].clone()).collect();
    FrameIndexMap { indices }
}

/// Freeze each frame (repeat its predecessor) with probability `p`.
pub fn freezing_map(t: usize, p: f64, seed: u64) -> FrameIndexMap {
    assert!(t >= 1 && (0.0..=1.0).contains(&p));
    let mut rng = stream(seed);
    let mut indices = Vec::with_capacity(t);
    indices.push(0);
    for pos in 1..t {
        let u: f64 = rng.random_range(0.0..1.0);
        if u < p {
            indices.push(indices[pos - 1]);
        } else {
            indices.push(pos);
        }
    }
    FrameIndexMap { indices }
}

/// Materialize a perturbed clip: output frame j is a copy of source frame
/// `map.indices[j]`.
pub fn apply_index_map(clip: &Clip, map: &FrameIndexMap) -> Result<Clip> {
    let t = clip.len();
    let mut frames = Vec::with_capacity(map.len());
    for &i in &map.indices {
        if i >= t {
            return Err(Error::IndexOutOfRange { index: i, len: t });
        }
        frames.push(clip.frames[i].clone());
    }
    Ok(clip.with_frames(frames))
}
