//! Severity ladders: the 5-entry parameter tables each perturbation kind
//! sweeps from severity 1 (minimal) to 5 (maximal).
//!
//! The shipped defaults define benchmark v1. They can be dumped to a flat
//! config file (one line per kind/severity/parameter/value) and overridden
//! from such a file.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spec::Kind;

/// Typed parameters for one (kind, severity) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Gaussian { sigma: f64 },
    Shot { lambda: f64 },
    Impulse { p: f64 },
    Speckle { sigma: f64 },
    Defocus { radius: u32 },
    Motion { radius: u32, sigma: f64 },
    Zoom { max_zoom: f64, step: f64 },
    Jpeg { quality: u8 },
    Mpeg { bitrate_fraction: f64 },
    Sampling { k: u32 },
    Reversal { k: u32 },
    Jumbling { m: u32 },
    BoxJumbling { m: u32 },
    Freezing { p: f64 },
    StaticRotation { degrees: f64 },
    RandomRotation { bound: f64 },
    Translation { jitter: u32 },
}

const DEFAULT_VERSION: &str = "v1";

/// Versioned table of all ladders, keyed by (kind, severity, parameter).
#[derive(Debug, Clone, PartialEq)]
pub struct Ladders {
    pub version: String,
    table: BTreeMap<(Kind, u8), BTreeMap<String, f64>>,
}

fn ladder_rows() -> Vec<(Kind, &'static str, [f64; 5])> {
    vec![
        (Kind::Gaussian, "sigma", [0.04, 0.08, 0.12, 0.18, 0.26]),
        (Kind::Shot, "lambda", [60.0, 25.0, 12.0, 5.0, 3.0]),
        (Kind::Impulse, "p", [0.02, 0.04, 0.07, 0.10, 0.17]),
        (Kind::Speckle, "sigma", [0.10, 0.20, 0.35, 0.45, 0.60]),
        (Kind::Defocus, "radius", [2.0, 3.0, 4.0, 6.0, 8.0]),
        (Kind::Motion, "radius", [5.0, 7.0, 9.0, 12.0, 15.0]),
        (Kind::Zoom, "max_zoom", [1.06, 1.11, 1.16, 1.21, 1.26]),
        (Kind::Zoom, "step", [0.01, 0.01, 0.01, 0.01, 0.01]),
        (Kind::Jpeg, "quality", [25.0, 18.0, 15.0, 10.0, 7.0]),
        (Kind::Mpeg1, "bitrate_fraction", [0.50, 0.30, 0.20, 0.12, 0.07]),
        (Kind::Mpeg2, "bitrate_fraction", [0.50, 0.30, 0.20, 0.12, 0.07]),
        (Kind::Sampling, "k", [2.0, 3.0, 4.0, 5.0, 6.0]),
        (Kind::Reversal, "k", [2.0, 3.0, 4.0, 5.0, 6.0]),
        (Kind::Jumbling, "m", [4.0, 8.0, 16.0, 32.0, 64.0]),
        (Kind::BoxJumbling, "m", [64.0, 32.0, 16.0, 8.0, 4.0]),
        (Kind::Freezing, "p", [0.1, 0.2, 0.3, 0.4, 0.5]),
        (Kind::StaticRotation, "degrees", [10.0, 20.0, 30.0, 45.0, 60.0]),
        (Kind::RandomRotation, "bound", [10.0, 20.0, 30.0, 45.0, 60.0]),
        (Kind::Translation, "jitter", [4.0, 8.0, 12.0, 16.0, 16.0]),
    ]
}

impl Default for Ladders {
    fn default() -> Ladders {
        let mut table: BTreeMap<(Kind, u8), BTreeMap<String, f64>> = BTreeMap::new();
        for (kind, param, values) in ladder_rows() {
            for (i, &v) in values.iter().enumerate() {
                table
                    .entry((kind, i as u8 + 1))
                    .or_default()
                    .insert(param.to_string(), v);
            }
        }
        // Motion sigma is tied to the kernel radius.
        for sev in 1..=5u8 {
            let radius = table[&(Kind::Motion, sev)]["radius"];
            table
                .get_mut(&(Kind::Motion, sev))
                .unwrap()
                .insert("sigma".to_string(), radius / 3.0);
        }
        Ladders { version: DEFAULT_VERSION.to_string(), table }
    }
}

impl Ladders {
    fn get(&self, kind: Kind, severity: u8, param: &str) -> Result<f64> {
        self.table
            .get(&(kind, severity))
            .and_then(|m| m.get(param))
            .copied()
            .ok_or_else(|| {
                Error::InvalidLadder(format!("missing {kind} severity {severity} {param}"))
            })
    }

    /// Typed parameters for one (kind, severity) cell.
    pub fn params(&self, kind: Kind, severity: u8) -> Result<Params> {
        if !(1..=5).contains(&severity) {
            return Err(Error::UnsupportedSpec(format!(
                "severity must be 1..=5, got {severity}"
            )));
        }
        let p = match kind {
            Kind::Gaussian => Params::Gaussian { sigma: self.get(kind, severity, "sigma")? },
            Kind::Shot => Params::Shot { lambda: self.get(kind, severity, "lambda")? },
            Kind::Impulse => Params::Impulse { p: self.get(kind, severity, "p")? },
            Kind::Speckle => Params::Speckle { sigma: self.get(kind, severity, "sigma")? },
            Kind::Defocus => {
                Params::Defocus { radius: self.get(kind, severity, "radius")? as u32 }
            }
            Kind::Motion => Params::Motion {
                radius: self.get(kind, severity, "radius")? as u32,
                sigma: self.get(kind, severity, "sigma")?,
            },
            Kind::Zoom => Params::Zoom {
                max_zoom: self.get(kind, severity, "max_zoom")?,
                step: self.get(kind, severity, "step")?,
            },
            Kind::Jpeg => Params::Jpeg { quality: self.get(kind, severity, "quality")? as u8 },
            Kind::Mpeg1 | Kind::Mpeg2 => Params::Mpeg {
                bitrate_fraction: self.get(kind, severity, "bitrate_fraction")?,
            },
            Kind::Sampling => Params::Sampling { k: self.get(kind, severity, "k")? as u32 },
            Kind::Reversal => Params::Reversal { k: self.get(kind, severity, "k")? as u32 },
            Kind::Jumbling => Params::Jumbling { m: self.get(kind, severity, "m")? as u32 },
            Kind::BoxJumbling => {
                Params::BoxJumbling { m: self.get(kind, severity, "m")? as u32 }
            }
            Kind::Freezing => Params::Freezing { p: self.get(kind, severity, "p")? },
            Kind::StaticRotation => {
                Params::StaticRotation { degrees: self.get(kind, severity, "degrees")? }
            }
            Kind::RandomRotation => {
                Params::RandomRotation { bound: self.get(kind, severity, "bound")? }
            }
            Kind::Translation => {
                Params::Translation { jitter: self.get(kind, severity, "jitter")? as u32 }
            }
        };
        Ok(p)
    }

    /// Flat key-value dump: one line per (kind, severity, parameter, value).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# version: {}", self.version).unwrap();
        for ((kind, severity), params) in &self.table {
            for (param, value) in params {
                writeln!(out, "{kind} {severity} {param} {value}").unwrap();
            }
        }
        out
    }

    /// Parse a dump produced by [`Ladders::dump`] (or hand-edited overrides).
    pub fn parse(text: &str) -> Result<Ladders> {
        let mut version = "custom".to_string();
        let mut table: BTreeMap<(Kind, u8), BTreeMap<String, f64>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("version:") {
                    version = v.trim().to_string();
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::InvalidLadder(format!(
                    "line {}: expected `kind severity param value`",
                    lineno + 1
                )));
            }
            let kind: Kind = fields[0].parse()?;
            let severity: u8 = fields[1]
                .parse()
                .map_err(|_| Error::InvalidLadder(format!("line {}: bad severity", lineno + 1)))?;
            if !(1..=5).contains(&severity) {
                return Err(Error::InvalidLadder(format!(
                    "line {}: severity out of range",
                    lineno + 1
                )));
            }
            let value: f64 = fields[3]
                .parse()
                .map_err(|_| Error::InvalidLadder(format!("line {}: bad value", lineno + 1)))?;
            table
                .entry((kind, severity))
                .or_default()
                .insert(fields[2].to_string(), value);
        }
        let ladders = Ladders { version, table };
        ladders.validate()?;
        Ok(ladders)
    }

    /// Check every (kind, severity) cell is present and typed access works.
    pub fn validate(&self) -> Result<()> {
        for kind in Kind::ALL {
            for severity in 1..=5 {
                self.params(kind, severity)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Ladders::default().validate().unwrap();
    }

    #[test]
    fn dump_parse_roundtrip() {
        let defaults = Ladders::default();
        let parsed = Ladders::parse(&defaults.dump()).unwrap();
        assert_eq!(parsed, defaults);
    }

    #[test]
    fn jumbling_segment_sizes_pinned() {
        let l = Ladders::default();
        let ms: Vec<u32> = (1..=5)
            .map(|s| match l.params(Kind::Jumbling, s).unwrap() {
                Params::Jumbling { m } => m,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ms, vec![4, 8, 16, 32, 64]);
        let box_ms: Vec<u32> = (1..=5)
            .map(|s| match l.params(Kind::BoxJumbling, s).unwrap() {
                Params::BoxJumbling { m } => m,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(box_ms, vec![64, 32, 16, 8, 4]);
    }

    // Strength must not decrease from severity 1 to 5. For most kinds the
    // parameter grows; shot lambda, jpeg quality, mpeg bitrate, and the
    // box-jumbling segment size shrink as strength grows.
    #[test]
    fn ladders_monotone_in_strength() {
        let l = Ladders::default();
        let decreasing = ["lambda", "quality", "bitrate_fraction"];
        for (kind, param, _) in ladder_rows() {
            if param == "step" {
                continue;
            }
            let vals: Vec<f64> =
                (1..=5).map(|s| l.get(kind, s, param).unwrap()).collect();
            let down = decreasing.contains(&param) || kind == Kind::BoxJumbling;
            for w in vals.windows(2) {
                if down {
                    assert!(w[1] < w[0], "{kind} {param} not decreasing: {vals:?}");
                } else {
                    assert!(w[1] >= w[0], "{kind} {param} not increasing: {vals:?}");
                }
            }
        }
    }

    #[test]
    fn override_applies() {
        let text = Ladders::default()
            .dump()
            .replace("gaussian 1 sigma 0.04", "gaussian 1 sigma 0.05");
        let l = Ladders::parse(&text).unwrap();
        match l.params(Kind::Gaussian, 1).unwrap() {
            Params::Gaussian { sigma } => assert_eq!(sigma, 0.05),
            _ => unreachable!(),
        }
    }

    #[test]
    fn missing_cell_rejected() {
        let text: String = Ladders::default()
            .dump()
            .lines()
            .filter(|l| !l.starts_with("freezing 3"))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(Ladders::parse(&text).is_err());
    }
}
