//! Report emission: a long-form scores CSV, markdown summary tables, and a
//! plot-ready accuracy-vs-severity CSV.
//!
//! `scores.csv` is one long table rather than several files:
//!
//! ```text
//! model,scope,name,severity,accuracy,gamma_abs,gamma_rel
//! r3d,clean,,0,74.4,,
//! r3d,cell,gaussian,3,41.2,0.668,0.5538...
//! r3d,kind,gaussian,,,0.71,0.62
//! r3d,category,noise,,,0.70,0.60
//! r3d,overall,,,,0.73,0.64
//! ```
//!
//! Values are written with full float precision; rounding to two decimals
//! happens only in the markdown tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::{AggregateScore, CellScore, ModelScores};
use crate::spec::{Category, Kind};

pub const SCORES_HEADER: &str = "model,scope,name,severity,accuracy,gamma_abs,gamma_rel";

pub fn write_scores_csv(models: &[ModelScores], out: &mut impl std::io::Write) -> Result<()> {
    writeln!(out, "{SCORES_HEADER}")?;
    for m in models {
        writeln!(out, "{},clean,,0,{},,", m.model, m.clean_accuracy)?;
        for (&(kind, sev), cell) in &m.cells {
            writeln!(
                out,
                "{},cell,{kind},{sev},{},{},{}",
                m.model, cell.accuracy, cell.gamma_abs, cell.gamma_rel
            )?;
        }
        for (kind, agg) in &m.per_kind {
            writeln!(out, "{},kind,{kind},,,{},{}", m.model, agg.gamma_abs, agg.gamma_rel)?;
        }
        for (cat, agg) in &m.per_category {
            writeln!(out, "{},category,{cat},,,{},{}", m.model, agg.gamma_abs, agg.gamma_rel)?;
        }
        writeln!(out, "{},overall,,,,{},{}", m.model, m.overall.gamma_abs, m.overall.gamma_rel)?;
    }
    Ok(())
}

fn parse_f64(field: &str, row: usize) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("scores row {row}: bad number {field:?}")))
}

pub fn read_scores_csv(reader: impl std::io::Read) -> Result<Vec<ModelScores>> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut order: Vec<String> = Vec::new();
    let mut models: BTreeMap<String, ModelScores> = BTreeMap::new();
    for (i, row) in csv.records().enumerate() {
        let rownum = i + 2;
        let row = row.map_err(|e| Error::Parse(format!("scores row {rownum}: {e}")))?;
        if row.len() != 7 {
            return Err(Error::Parse(format!("scores row {rownum}: expected 7 fields")));
        }
        let model = row[0].to_string();
        if !models.contains_key(&model) {
            order.push(model.clone());
            models.insert(
                model.clone(),
                ModelScores {
                    model: model.clone(),
                    clean_accuracy: f64::NAN,
                    cells: BTreeMap::new(),
                    per_kind: BTreeMap::new(),
                    per_category: BTreeMap::new(),
                    overall: AggregateScore { gamma_abs: f64::NAN, gamma_rel: f64::NAN },
                },
            );
        }
        let entry = models.get_mut(&model).unwrap();
        match &row[1] {
            "clean" => entry.clean_accuracy = parse_f64(&row[4], rownum)?,
            "cell" => {
                let kind: Kind = row[2].parse()?;
                let sev: u8 = row[3]
                    .parse()
                    .map_err(|_| Error::Parse(format!("scores row {rownum}: bad severity")))?;
                entry.cells.insert(
                    (kind, sev),
                    CellScore {
                        accuracy: parse_f64(&row[4], rownum)?,
                        gamma_abs: parse_f64(&row[5], rownum)?,
                        gamma_rel: parse_f64(&row[6], rownum)?,
                    },
                );
            }
            "kind" => {
                let kind: Kind = row[2].parse()?;
                entry.per_kind.insert(
                    kind,
                    AggregateScore {
                        gamma_abs: parse_f64(&row[5], rownum)?,
                        gamma_rel: parse_f64(&row[6], rownum)?,
                    },
                );
            }
            "category" => {
                let cat: Category = row[2].parse()?;
                entry.per_category.insert(
                    cat,
                    AggregateScore {
                        gamma_abs: parse_f64(&row[5], rownum)?,
                        gamma_rel: parse_f64(&row[6], rownum)?,
                    },
                );
            }
            "overall" => {
                entry.overall = AggregateScore {
                    gamma_abs: parse_f64(&row[5], rownum)?,
                    gamma_rel: parse_f64(&row[6], rownum)?,
                };
            }
            other => {
                return Err(Error::Parse(format!("scores row {rownum}: unknown scope {other:?}")))
            }
        }
    }
    Ok(order.into_iter().map(|m| models.remove(&m).unwrap()).collect())
}

const TABLE_CATEGORIES: [Category; 5] = [
    Category::Noise,
    Category::Blur,
    Category::Temporal,
    Category::Digital,
    Category::Camera,
];

fn markdown_table(models: &[ModelScores], pick: impl Fn(&AggregateScore) -> f64) -> String {
    let mut s = String::new();
    s.push_str("| Model |");
    for cat in TABLE_CATEGORIES {
        write!(s, " {cat} |").unwrap();
    }
    s.push_str(" Mean |\n|---|");
    for _ in 0..TABLE_CATEGORIES.len() + 1 {
        s.push_str("---|");
    }
    s.push('\n');
    for m in models {
        write!(s, "| {} |", m.model).unwrap();
        for cat in TABLE_CATEGORIES {
            match m.per_category.get(&cat) {
                Some(agg) => write!(s, " {:.2} |", pick(agg)).unwrap(),
                None => s.push_str(" - |"),
            }
        }
        writeln!(s, " {:.2} |", pick(&m.overall)).unwrap();
    }
    s
}

/// Two markdown tables, one per metric: rows are models, columns are
/// category means plus the overall mean, rounded to two decimals.
pub fn markdown_report(models: &[ModelScores]) -> String {
    format!(
        "## Absolute robustness (gamma_abs)\n\n{}\n## Relative robustness (gamma_rel)\n\n{}",
        markdown_table(models, |a| a.gamma_abs),
        markdown_table(models, |a| a.gamma_rel),
    )
}

/// Plot-ready series: `model,kind,severity,accuracy`, one row per severity
/// 0..=5 per kind, severity 0 being the clean accuracy.
pub fn accuracy_vs_severity_csv(
    models: &[ModelScores],
    out: &mut impl std::io::Write,
) -> Result<()> {
    writeln!(out, "model,kind,severity,accuracy")?;
    for m in models {
        for kind in Kind::ALL {
            if !m.cells.keys().any(|&(k, _)| k == kind) {
                continue;
            }
            writeln!(out, "{},{kind},0,{}", m.model, m.clean_accuracy)?;
            for sev in 1..=5u8 {
                if let Some(cell) = m.cells.get(&(kind, sev)) {
                    writeln!(out, "{},{kind},{sev},{}", m.model, cell.accuracy)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_models() -> Vec<ModelScores> {
        let mut cells = BTreeMap::new();
        let mut per_kind = BTreeMap::new();
        for kind in Kind::ALL {
            for sev in 1..=5u8 {
                cells.insert(
                    (kind, sev),
                    CellScore {
                        accuracy: 50.0 + sev as f64,
                        gamma_abs: 0.8,
                        gamma_rel: 0.7,
                    },
                );
            }
            per_kind.insert(kind, AggregateScore { gamma_abs: 0.8, gamma_rel: 0.7 });
        }
        let per_category = Category::ALL
            .into_iter()
            .map(|c| (c, AggregateScore { gamma_abs: 0.8, gamma_rel: 0.7 }))
            .collect();
        vec![ModelScores {
            model: "r3d".into(),
            clean_accuracy: 74.4,
            cells,
            per_kind,
            per_category,
            overall: AggregateScore { gamma_abs: 0.8, gamma_rel: 0.7 },
        }]
    }

    #[test]
    fn scores_csv_roundtrip() {
        let models = sample_models();
        let mut buf = Vec::new();
        write_scores_csv(&models, &mut buf).unwrap();
        let back = read_scores_csv(buf.as_slice()).unwrap();
        assert_eq!(back, models);
    }

    #[test]
    fn markdown_layout() {
        let mut models = sample_models();
        let mut second = models[0].clone();
        second.model = "i3d".into();
        models.push(second);
        let md = markdown_report(&models);
        let header = "| Model | Noise | Blur | Temporal | Digital | Camera | Mean |";
        assert_eq!(md.matches(header).count(), 2);
        assert_eq!(md.matches("| r3d |").count(), 2);
        assert_eq!(md.matches("| i3d |").count(), 2);
        assert!(md.contains("0.80"));
        assert!(md.contains("0.70"));
    }

    #[test]
    fn severity_series_starts_at_clean() {
        let models = sample_models();
        let mut buf = Vec::new();
        accuracy_vs_severity_csv(&models, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // header + 18 kinds x 6 severities
        assert_eq!(lines.len(), 1 + 18 * 6);
        assert_eq!(lines[1], "r3d,gaussian,0,74.4");
        assert_eq!(lines[2], "r3d,gaussian,1,51");
    }

    #[test]
    fn malformed_scores_rejected() {
        let bad = "model,scope,name,severity,accuracy,gamma_abs,gamma_rel\nr3d,bogus,,,,,\n";
        assert!(read_scores_csv(bad.as_bytes()).is_err());
    }
}
