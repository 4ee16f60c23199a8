//! Benchmark construction: apply every spec to every test video, persist
//! outputs and a resumable manifest.
//!
//! Layout under the output root:
//!
//! ```text
//! out_root/manifest.jsonl
//! out_root/<kind>/<severity>/<video_id>/frame_00000.png ...
//! out_root/<kind>/<severity>/<video_id>/indices.txt        (temporal kinds)
//! out_root/<kind>/<severity>/<video_id>/clip.mpg           (mpeg kinds)
//! ```
//!
//! Temporal kinds store only the index map plus a pointer to the clean
//! frames; the perturbed pixels are a pure re-indexing and are not
//! duplicated. All paths in the manifest are relative to the root so a
//! benchmark directory is relocatable.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apply::{apply, Applied, ApplyOptions};
use crate::clipio::{pixel_checksum, read_clip, write_clip};
use crate::error::{Error, Result};
use crate::ladder::Ladders;
use crate::protocol::ProtocolConfig;
use crate::seed::SeedContext;
use crate::spec::{enumerate_specs, Category, Kind, PerturbationSpec};
use crate::temporal::{apply_index_map, FrameIndexMap};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// One clean test video.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestEntry {
    pub video_id: String,
    pub path: PathBuf,
    pub label: u32,
}

/// Parse a `video_id,path,label` CSV. Ids must be unique.
pub fn read_test_list(reader: impl std::io::Read) -> Result<Vec<TestEntry>> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut out: Vec<TestEntry> = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("test list row {}: {e}", i + 2)))?;
        if row.len() != 3 {
            return Err(Error::Parse(format!(
                "test list row {}: expected video_id,path,label",
                i + 2
            )));
        }
        let entry = TestEntry {
            video_id: row[0].to_string(),
            path: PathBuf::from(&row[1]),
            label: row[2]
                .parse()
                .map_err(|_| Error::Parse(format!("test list row {}: bad label", i + 2)))?,
        };
        if out.iter().any(|e| e.video_id == entry.video_id) {
            return Err(Error::Parse(format!("duplicate video id {:?}", entry.video_id)));
        }
        out.push(entry);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub master_seed: u64,
    pub ladder_version: String,
    pub tool_version: String,
    pub protocol: ProtocolConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Failed,
    Planned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub video_id: String,
    pub kind: Kind,
    pub severity: u8,
    /// Output directory, relative to the benchmark root.
    pub output: String,
    pub status: RowStatus,
    /// Decoded-pixel checksum of the perturbed clip (hex). Absent for MPEG
    /// rows, which are not bitwise reproducible across encoder builds, and
    /// for planned/failed rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checksum: Option<String>,
    /// Number of frames written (or re-indexed).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames: Option<usize>,
    /// Index-map file, relative to the root (temporal kinds only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_map: Option<String>,
    /// Pointer to the clean source (temporal kinds re-index it).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Container file, relative to the root (mpeg kinds only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub container: Option<String>,
    /// Encoder argv, recorded for auditability (mpeg kinds only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoder_argv: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchManifest {
    pub header: ManifestHeader,
    pub rows: Vec<ManifestRow>,
}

impl BenchManifest {
    /// Atomic write: temp file then rename, so a crash never leaves a
    /// manifest claiming rows that were not fully recorded.
    pub fn write(&self, root: &Path) -> Result<()> {
        std::fs::create_dir_all(root)?;
        let tmp = root.join(format!("{MANIFEST_FILE}.tmp"));
        {
            let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
            serde_json::to_writer(&mut f, &self.header)
                .map_err(|e| Error::Parse(e.to_string()))?;
            f.write_all(b"\n")?;
            for row in &self.rows {
                serde_json::to_writer(&mut f, row).map_err(|e| Error::Parse(e.to_string()))?;
                f.write_all(b"\n")?;
            }
            f.flush()?;
        }
        std::fs::rename(tmp, root.join(MANIFEST_FILE))?;
        Ok(())
    }

    pub fn read(root: &Path) -> Result<BenchManifest> {
        let file = std::fs::File::open(root.join(MANIFEST_FILE))?;
        let mut lines = std::io::BufReader::new(file).lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Parse("empty manifest".into()))??;
        let header: ManifestHeader =
            serde_json::from_str(&header_line).map_err(|e| Error::Parse(e.to_string()))?;
        let mut rows = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            rows.push(serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?);
        }
        Ok(BenchManifest { header, rows })
    }
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Emit manifest rows without decoding inputs or writing outputs.
    pub dry_run: bool,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
    /// Restrict to a subset of specs (kind filter from the CLI).
    pub filter: Option<Vec<PerturbationSpec>>,
    pub consistent_noise: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub built: usize,
    pub skipped: usize,
    pub failed: usize,
    pub planned: usize,
}

fn output_dir(spec: PerturbationSpec, video_id: &str) -> String {
    format!("{}/{}/{}", spec.kind, spec.severity, video_id)
}

fn is_temporal(kind: Kind) -> bool {
    kind.category() == Category::Temporal
}

fn is_mpeg(kind: Kind) -> bool {
    matches!(kind, Kind::Mpeg1 | Kind::Mpeg2)
}

// A previously built row can be skipped when its files are still present
// and (for checksummed kinds) the pixels still hash to the recorded value.
fn row_still_valid(row: &ManifestRow, root: &Path) -> bool {
    if row.status != RowStatus::Ok {
        return false;
    }
    let dir = root.join(&row.output);
    if is_temporal(row.kind) {
        let Some(map_rel) = &row.index_map else { return false };
        return root.join(map_rel).is_file();
    }
    let frames = row.frames.unwrap_or(0);
    for i in 0..frames {
        if !dir.join(format!("frame_{i:05}.png")).is_file() {
            return false;
        }
    }
    if is_mpeg(row.kind) {
        return row
            .container
            .as_ref()
            .map(|c| root.join(c).is_file())
            .unwrap_or(false);
    }
    match (&row.checksum, read_clip(&dir, &row.video_id)) {
        (Some(sum), Ok(clip)) => format!("{:016x}", pixel_checksum(&clip)) == *sum,
        _ => false,
    }
}

fn build_row(
    entry: &TestEntry,
    spec: PerturbationSpec,
    ctx: &SeedContext,
    ladders: &Ladders,
    root: &Path,
    consistent_noise: bool,
) -> ManifestRow {
    let out_rel = output_dir(spec, &entry.video_id);
    let mut row = ManifestRow {
        video_id: entry.video_id.clone(),
        kind: spec.kind,
        severity: spec.severity,
        output: out_rel.clone(),
        status: RowStatus::Failed,
        checksum: None,
        frames: None,
        index_map: None,
        source: None,
        container: None,
        encoder_argv: None,
        error: None,
    };
    let result = (|| -> Result<()> {
        let clip = read_clip(&entry.path, &entry.video_id)?;
        let out_dir = root.join(&out_rel);
        let opts = ApplyOptions {
            consistent_noise,
            scratch_dir: Some(out_dir.clone()),
        };
        let Applied { clip: perturbed, index_map, mpeg } =
            apply(spec, &clip, ctx, ladders, &opts)?;
        row.frames = Some(perturbed.len());
        if let Some(map) = index_map {
            // Pure re-indexing: persist the map and the source pointer only.
            std::fs::create_dir_all(&out_dir)?;
            let map_rel = format!("{out_rel}/indices.txt");
            std::fs::write(
                root.join(&map_rel),
                format!("{}\n", map.to_line(&entry.video_id, spec.kind, spec.severity)),
            )?;
            row.index_map = Some(map_rel);
            row.source = Some(entry.path.to_string_lossy().into_owned());
            row.checksum = Some(format!("{:016x}", pixel_checksum(&perturbed)));
        } else if let Some(artifacts) = mpeg {
            write_clip(&perturbed, &out_dir)?;
            let container_rel = format!("{out_rel}/clip.mpg");
            if artifacts.container != root.join(&container_rel) {
                std::fs::rename(&artifacts.container, root.join(&container_rel))?;
            }
            row.container = Some(container_rel);
            row.encoder_argv = Some(artifacts.encode_argv);
        } else {
            write_clip(&perturbed, &out_dir)?;
            row.checksum = Some(format!("{:016x}", pixel_checksum(&perturbed)));
        }
        row.status = RowStatus::Ok;
        Ok(())
    })();
    if let Err(e) = result {
        row.status = RowStatus::Failed;
        row.error = Some(e.to_string());
    }
    row
}

/// Build (or resume) a benchmark under `out_root`.
pub fn build_benchmark(
    test_list: &[TestEntry],
    ctx: &SeedContext,
    ladders: &Ladders,
    protocol: ProtocolConfig,
    out_root: &Path,
    opts: &BuildOptions,
) -> Result<(BenchManifest, BuildStats)> {
    let header = ManifestHeader {
        master_seed: ctx.master_seed,
        ladder_version: ladders.version.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        protocol,
    };

    let mut existing: BTreeMap<(String, Kind, u8), ManifestRow> = BTreeMap::new();
    if out_root.join(MANIFEST_FILE).is_file() {
        let previous = BenchManifest::read(out_root)?;
        if previous.header.master_seed != header.master_seed {
            return Err(Error::ManifestConflict(format!(
                "existing manifest has master_seed {}, requested {}",
                previous.header.master_seed, header.master_seed
            )));
        }
        if previous.header.ladder_version != header.ladder_version {
            return Err(Error::ManifestConflict(format!(
                "existing manifest has ladder version {:?}, requested {:?}",
                previous.header.ladder_version, header.ladder_version
            )));
        }
        for row in previous.rows {
            existing.insert((row.video_id.clone(), row.kind, row.severity), row);
        }
    }

    let specs: Vec<PerturbationSpec> = match &opts.filter {
        Some(subset) => subset.clone(),
        None => enumerate_specs(),
    };

    let mut stats = BuildStats::default();
    let mut tasks: Vec<(&TestEntry, PerturbationSpec)> = Vec::new();
    let mut rows: Vec<ManifestRow> = Vec::new();

    for entry in test_list {
        for &spec in &specs {
            if opts.dry_run {
                stats.planned += 1;
                rows.push(ManifestRow {
                    video_id: entry.video_id.clone(),
                    kind: spec.kind,
                    severity: spec.severity,
                    output: output_dir(spec, &entry.video_id),
                    status: RowStatus::Planned,
                    checksum: None,
                    frames: None,
                    index_map: None,
                    source: None,
                    container: None,
                    encoder_argv: None,
                    error: None,
                });
                continue;
            }
            let key = (entry.video_id.clone(), spec.kind, spec.severity);
            if let Some(row) = existing.get(&key) {
                if row_still_valid(row, out_root) {
                    stats.skipped += 1;
                    rows.push(row.clone());
                    continue;
                }
            }
            tasks.push((entry, spec));
        }
    }

    if !tasks.is_empty() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?;
        let built: Vec<ManifestRow> = pool.install(|| {
            tasks
                .par_iter()
                .map(|(entry, spec)| {
                    build_row(entry, *spec, ctx, ladders, out_root, opts.consistent_noise)
                })
                .collect()
        });
        for row in built {
            match row.status {
                RowStatus::Ok => stats.built += 1,
                _ => stats.failed += 1,
            }
            rows.push(row);
        }
    }

    // Canonical order keeps the manifest independent of scheduling.
    rows.sort_by(|a, b| {
        (a.kind, a.severity, &a.video_id).cmp(&(b.kind, b.severity, &b.video_id))
    });
    let manifest = BenchManifest { header, rows };
    manifest.write(out_root)?;
    Ok((manifest, stats))
}

/// Outcome of re-checking a benchmark against its manifest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    pub missing: Vec<String>,
    pub corrupt: Vec<String>,
    pub failed_rows: Vec<String>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.corrupt.is_empty()
    }
}

/// Re-check file presence and pixel checksums for every completed row.
pub fn verify_benchmark(root: &Path) -> Result<VerifyReport> {
    let manifest = BenchManifest::read(root)?;
    let mut report = VerifyReport::default();
    for row in &manifest.rows {
        let tag = format!("{}:{}/{}", row.kind, row.severity, row.video_id);
        match row.status {
            RowStatus::Planned => continue,
            RowStatus::Failed => {
                report.failed_rows.push(tag);
                continue;
            }
            RowStatus::Ok => {}
        }
        report.checked += 1;
        if is_temporal(row.kind) {
            let Some(map_rel) = &row.index_map else {
                report.corrupt.push(tag);
                continue;
            };
            let map_path = root.join(map_rel);
            if !map_path.is_file() {
                report.missing.push(tag);
                continue;
            }
            // Reconstruct the perturbed clip from the clean source and the
            // stored map, and compare pixel checksums.
            let ok = (|| -> Result<bool> {
                let text = std::fs::read_to_string(&map_path)?;
                let line = text.lines().next().unwrap_or("");
                let (_, _, _, map) = FrameIndexMap::from_line(line)?;
                let Some(source) = &row.source else { return Ok(false) };
                let clip = read_clip(Path::new(source), &row.video_id)?;
                let perturbed = apply_index_map(&clip, &map)?;
                Ok(row.checksum.as_deref()
                    == Some(format!("{:016x}", pixel_checksum(&perturbed)).as_str()))
            })();
            if !matches!(ok, Ok(true)) {
                report.corrupt.push(tag);
            }
            continue;
        }
        let dir = root.join(&row.output);
        let frames = row.frames.unwrap_or(0);
        let all_present = (0..frames).all(|i| dir.join(format!("frame_{i:05}.png")).is_file());
        let container_present = row
            .container
            .as_ref()
            .map(|c| root.join(c).is_file())
            .unwrap_or(true);
        if !all_present || !container_present {
            report.missing.push(tag);
            continue;
        }
        if let Some(sum) = &row.checksum {
            match read_clip(&dir, &row.video_id) {
                Ok(clip) if format!("{:016x}", pixel_checksum(&clip)) == *sum => {}
                _ => report.corrupt.push(tag),
            }
        }
    }
    Ok(report)
}
