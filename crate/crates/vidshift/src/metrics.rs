//! Accuracy aggregation over prediction logs and the robustness scores.
//!
//! Given a model `f`, clean top-1 accuracy `A_c` and perturbed accuracy
//! `A_{p,s}` (both in percent), the two scores are
//!
//! absolute:  gamma_a = 1 - (A_c - A_{p,s}) / 100
//! relative:  gamma_r = 1 - (A_c - A_{p,s}) / A_c
//!
//! Values are not clamped: a perturbation that beats clean accuracy
//! scores above 1. Accuracies carry full float precision internally;
//! rounding happens only in reports.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spec::{Category, Kind};

/// What one prediction record was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Perturbation {
    Clean,
    Spec(Kind, u8),
}

impl std::fmt::Display for Perturbation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Perturbation::Clean => write!(f, "clean:0"),
            Perturbation::Spec(kind, sev) => write!(f, "{kind}:{sev}"),
        }
    }
}

/// The model output for one crop: either a hard label or a score vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Pred {
    Label(u32),
    Scores(Vec<f64>),
}

/// One row of a prediction log.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub video_id: String,
    pub model: String,
    pub perturbation: Perturbation,
    pub crop_id: u32,
    pub true_label: u32,
    pub pred: Pred,
}

/// Parse a prediction log CSV with header
/// `video_id,model,perturbation,severity,crop_id,true_label,pred`.
/// `pred` is a class id or a `|`-separated score vector; perturbation
/// `clean` must carry severity 0 and vice versa.
pub fn parse_prediction_log(reader: impl std::io::Read) -> Result<Vec<PredictionRecord>> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("prediction log row {}: {e}", i + 2)))?;
        if row.len() != 7 {
            return Err(Error::Parse(format!(
                "prediction log row {}: expected 7 fields, got {}",
                i + 2,
                row.len()
            )));
        }
        let severity: u8 = row[3]
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad severity {:?}", i + 2, &row[3])))?;
        let perturbation = match (&row[2], severity) {
            ("clean", 0) => Perturbation::Clean,
            ("clean", s) => {
                return Err(Error::Parse(format!("row {}: clean rows must have severity 0, got {s}", i + 2)))
            }
            (_, 0) => {
                return Err(Error::Parse(format!("row {}: severity 0 is reserved for clean", i + 2)))
            }
            (name, s) if (1..=5).contains(&s) => Perturbation::Spec(name.parse()?, s),
            (_, s) => return Err(Error::Parse(format!("row {}: severity {s} out of range", i + 2))),
        };
        let pred_field = &row[6];
        let pred = if pred_field.contains('|') {
            let scores = pred_field
                .split('|')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("row {}: bad score {s:?}", i + 2)))
                })
                .collect::<Result<Vec<f64>>>()?;
            Pred::Scores(scores)
        } else {
            Pred::Label(
                pred_field
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad pred {pred_field:?}", i + 2)))?,
            )
        };
        out.push(PredictionRecord {
            video_id: row[0].to_string(),
            model: row[1].to_string(),
            perturbation,
            crop_id: row[4]
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad crop_id", i + 2)))?,
            true_label: row[5]
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad true_label", i + 2)))?,
            pred,
        });
    }
    Ok(out)
}

/// Top-1 accuracies in percent, per model and per (perturbation, severity).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AccuracyTable {
    /// model -> clean accuracy
    pub clean: BTreeMap<String, f64>,
    /// model -> (kind, severity) -> accuracy
    pub perturbed: BTreeMap<String, BTreeMap<(Kind, u8), f64>>,
}

// Fuse one video's crop predictions into a single label: mean of score
// vectors and argmax, or majority vote with smallest-class-id tie-break
// when only hard labels are present.
fn fuse_crops(video_id: &str, preds: &[&Pred]) -> Result<u32> {
    let any_scores = preds.iter().any(|p| matches!(p, Pred::Scores(_)));
    if any_scores {
        let dim = match preds[0] {
            Pred::Scores(v) => v.len(),
            Pred::Label(_) => {
                return Err(Error::Parse(format!(
                    "video {video_id}: mixed score and label predictions"
                )))
            }
        };
        let mut mean = vec![0.0f64; dim];
        for p in preds {
            match p {
                Pred::Scores(v) if v.len() == dim => {
                    for (m, s) in mean.iter_mut().zip(v) {
                        *m += s;
                    }
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "video {video_id}: inconsistent score vectors"
                    )))
                }
            }
        }
        let mut best = 0usize;
        for (i, &v) in mean.iter().enumerate() {
            if v > mean[best] {
                best = i;
            }
        }
        Ok(best as u32)
    } else {
        let mut votes: BTreeMap<u32, usize> = BTreeMap::new();
        for p in preds {
            if let Pred::Label(l) = p {
                *votes.entry(*l).or_default() += 1;
            }
        }
        // BTreeMap iterates in ascending class id, so ties resolve to the
        // smallest id.
        let (label, _) = votes
            .into_iter()
            .fold(None::<(u32, usize)>, |acc, (l, n)| match acc {
                Some((_, best)) if n <= best => acc,
                _ => Some((l, n)),
            })
            .ok_or_else(|| Error::EmptyGroup(format!("video {video_id}")))?;
        Ok(label)
    }
}

/// Compute the accuracy table from raw records. Crops of one video are
/// fused first; accuracy is the percentage of videos whose fused
/// prediction matches the true label, per (model, perturbation).
pub fn accuracy(records: &[PredictionRecord]) -> Result<AccuracyTable> {
    if records.is_empty() {
        return Err(Error::EmptyGroup("prediction log".into()));
    }
    // (model, perturbation, video) -> (true_label, crop preds)
    let mut groups: BTreeMap<(&str, Perturbation, &str), (u32, Vec<&Pred>)> = BTreeMap::new();
    for r in records {
        let key = (r.model.as_str(), r.perturbation, r.video_id.as_str());
        let entry = groups.entry(key).or_insert((r.true_label, Vec::new()));
        if entry.0 != r.true_label {
            return Err(Error::InconsistentLabels {
                video_id: r.video_id.clone(),
                a: entry.0,
                b: r.true_label,
            });
        }
        entry.1.push(&r.pred);
    }

    let mut hits: BTreeMap<(String, Perturbation), (usize, usize)> = BTreeMap::new();
    for ((model, pert, video), (truth, preds)) in &groups {
        let fused = fuse_crops(video, preds)?;
        let entry = hits.entry((model.to_string(), *pert)).or_insert((0, 0));
        entry.1 += 1;
        if fused == *truth {
            entry.0 += 1;
        }
    }

    let mut table = AccuracyTable::default();
    for ((model, pert), (correct, total)) in hits {
        let acc = 100.0 * correct as f64 / total as f64;
        match pert {
            Perturbation::Clean => {
                table.clean.insert(model, acc);
            }
            Perturbation::Spec(kind, sev) => {
                table.perturbed.entry(model).or_default().insert((kind, sev), acc);
            }
        }
    }
    Ok(table)
}

/// Absolute robustness: `1 - (A_c - A_ps) / 100`.
pub fn gamma_abs(a_clean: f64, a_perturbed: f64) -> f64 {
    1.0 - (a_clean - a_perturbed) / 100.0
}

/// Relative robustness: `1 - (A_c - A_ps) / A_c`, i.e. `A_ps / A_c`.
pub fn gamma_rel(a_clean: f64, a_perturbed: f64) -> Result<f64> {
    if a_clean == 0.0 {
        return Err(Error::DivisionByZeroClean);
    }
    Ok(1.0 - (a_clean - a_perturbed) / a_clean)
}

/// Relative robustness against a perturbation-trained reference:
/// `1 - (A_f - A_fp) / A_fp` where `A_fp` is the perturbation-trained
/// model's accuracy.
pub fn gamma_rel_perturb_trained(a_clean_trained: f64, a_perturb_trained: f64) -> Result<f64> {
    if a_perturb_trained == 0.0 {
        return Err(Error::DivisionByZeroClean);
    }
    Ok(1.0 - (a_clean_trained - a_perturb_trained) / a_perturb_trained)
}

/// Scores for one (kind, severity) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellScore {
    pub accuracy: f64,
    pub gamma_abs: f64,
    pub gamma_rel: f64,
}

/// Severity-averaged scores for one kind, category, or overall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateScore {
    pub gamma_abs: f64,
    pub gamma_rel: f64,
}

/// Full robustness report for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelScores {
    pub model: String,
    pub clean_accuracy: f64,
    pub cells: BTreeMap<(Kind, u8), CellScore>,
    pub per_kind: BTreeMap<Kind, AggregateScore>,
    pub per_category: BTreeMap<Category, AggregateScore>,
    pub overall: AggregateScore,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Compute per-cell gammas and aggregate them: per kind over severities,
/// per category over its kinds, overall over all kinds. Every kind present
/// must cover severities 1..=5 unless `allow_partial`.
pub fn score_models(table: &AccuracyTable, allow_partial: bool) -> Result<Vec<ModelScores>> {
    let mut missing = Vec::new();
    for (model, cells) in &table.perturbed {
        if !table.clean.contains_key(model) {
            missing.push(format!("{model}/clean"));
        }
        let kinds: Vec<Kind> = cells.keys().map(|&(k, _)| k).collect();
        for kind in kinds {
            for sev in 1..=5 {
                if !cells.contains_key(&(kind, sev)) {
                    missing.push(format!("{model}/{kind}:{sev}"));
                }
            }
        }
    }
    if !missing.is_empty() && !allow_partial {
        missing.sort();
        missing.dedup();
        return Err(Error::IncompleteGrid(missing));
    }

    let mut out = Vec::new();
    for (model, cells) in &table.perturbed {
        let Some(&a_clean) = table.clean.get(model) else {
            continue; // partial mode: cannot score without a clean baseline
        };
        let mut scored: BTreeMap<(Kind, u8), CellScore> = BTreeMap::new();
        for (&(kind, sev), &acc) in cells {
            scored.insert(
                (kind, sev),
                CellScore {
                    accuracy: acc,
                    gamma_abs: gamma_abs(a_clean, acc),
                    gamma_rel: gamma_rel(a_clean, acc)?,
                },
            );
        }
        let mut per_kind: BTreeMap<Kind, AggregateScore> = BTreeMap::new();
        for kind in Kind::ALL {
            let abs = mean(
                scored
                    .iter()
                    .filter(|((k, _), _)| *k == kind)
                    .map(|(_, c)| c.gamma_abs),
            );
            let rel = mean(
                scored
                    .iter()
                    .filter(|((k, _), _)| *k == kind)
                    .map(|(_, c)| c.gamma_rel),
            );
            if let (Some(abs), Some(rel)) = (abs, rel) {
                per_kind.insert(kind, AggregateScore { gamma_abs: abs, gamma_rel: rel });
            }
        }
        let mut per_category: BTreeMap<Category, AggregateScore> = BTreeMap::new();
        for category in Category::ALL {
            let members: Vec<&AggregateScore> = category
                .kinds()
                .iter()
                .filter_map(|k| per_kind.get(k))
                .collect();
            if members.is_empty() {
                continue;
            }
            per_category.insert(
                category,
                AggregateScore {
                    gamma_abs: mean(members.iter().map(|s| s.gamma_abs)).unwrap(),
                    gamma_rel: mean(members.iter().map(|s| s.gamma_rel)).unwrap(),
                },
            );
        }
        let overall = AggregateScore {
            gamma_abs: mean(per_kind.values().map(|s| s.gamma_abs)).unwrap_or(f64::NAN),
            gamma_rel: mean(per_kind.values().map(|s| s.gamma_rel)).unwrap_or(f64::NAN),
        };
        out.push(ModelScores {
            model: model.clone(),
            clean_accuracy: a_clean,
            cells: scored,
            per_kind,
            per_category,
            overall,
        });
    }
    Ok(out)
}
