//! Perturbation taxonomy: five categories, eighteen kinds, five severities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Noise,
    Blur,
    Digital,
    Temporal,
    Camera,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Noise,
        Category::Blur,
        Category::Digital,
        Category::Temporal,
        Category::Camera,
    ];

    pub fn kinds(self) -> &'static [Kind] {
        match self {
            Category::Noise => &[Kind::Gaussian, Kind::Shot, Kind::Impulse, Kind::Speckle],
            Category::Blur => &[Kind::Defocus, Kind::Motion, Kind::Zoom],
            Category::Digital => &[Kind::Jpeg, Kind::Mpeg1, Kind::Mpeg2],
            Category::Temporal => &[
                Kind::Sampling,
                Kind::Reversal,
                Kind::Jumbling,
                Kind::BoxJumbling,
                Kind::Freezing,
            ],
            Category::Camera => &[Kind::StaticRotation, Kind::RandomRotation, Kind::Translation],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Category::Noise => "Noise",
            Category::Blur => "Blur",
            Category::Digital => "Digital",
            Category::Temporal => "Temporal",
            Category::Camera => "Camera",
        };
        f.write_str(name)
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Category, Error> {
        match s.to_ascii_lowercase().as_str() {
            "noise" => Ok(Category::Noise),
            "blur" => Ok(Category::Blur),
            "digital" => Ok(Category::Digital),
            "temporal" => Ok(Category::Temporal),
            "camera" => Ok(Category::Camera),
            other => Err(Error::UnsupportedSpec(format!("unknown category {other:?}"))),
        }
    }
}

/// One of the eighteen perturbation kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Gaussian,
    Shot,
    Impulse,
    Speckle,
    Defocus,
    Motion,
    Zoom,
    Jpeg,
    Mpeg1,
    Mpeg2,
    Sampling,
    Reversal,
    Jumbling,
    BoxJumbling,
    Freezing,
    StaticRotation,
    RandomRotation,
    Translation,
}

impl Kind {
    pub const ALL: [Kind; 18] = [
        Kind::Gaussian,
        Kind::Shot,
        Kind::Impulse,
        Kind::Speckle,
        Kind::Defocus,
        Kind::Motion,
        Kind::Zoom,
        Kind::Jpeg,
        Kind::Mpeg1,
        Kind::Mpeg2,
        Kind::Sampling,
        Kind::Reversal,
        Kind::Jumbling,
        Kind::BoxJumbling,
        Kind::Freezing,
        Kind::StaticRotation,
        Kind::RandomRotation,
        Kind::Translation,
    ];

    pub fn category(self) -> Category {
        match self {
            Kind::Gaussian | Kind::Shot | Kind::Impulse | Kind::Speckle => Category::Noise,
            Kind::Defocus | Kind::Motion | Kind::Zoom => Category::Blur,
            Kind::Jpeg | Kind::Mpeg1 | Kind::Mpeg2 => Category::Digital,
            Kind::Sampling
            | Kind::Reversal
            | Kind::Jumbling
            | Kind::BoxJumbling
            | Kind::Freezing => Category::Temporal,
            Kind::StaticRotation | Kind::RandomRotation | Kind::Translation => Category::Camera,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Gaussian => "gaussian",
            Kind::Shot => "shot",
            Kind::Impulse => "impulse",
            Kind::Speckle => "speckle",
            Kind::Defocus => "defocus",
            Kind::Motion => "motion",
            Kind::Zoom => "zoom",
            Kind::Jpeg => "jpeg",
            Kind::Mpeg1 => "mpeg1",
            Kind::Mpeg2 => "mpeg2",
            Kind::Sampling => "sampling",
            Kind::Reversal => "reversal",
            Kind::Jumbling => "jumbling",
            Kind::BoxJumbling => "box_jumbling",
            Kind::Freezing => "freezing",
            Kind::StaticRotation => "static_rotation",
            Kind::RandomRotation => "random_rotation",
            Kind::Translation => "translation",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind, Error> {
        Kind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnsupportedSpec(format!("unknown perturbation kind {s:?}")))
    }
}

/// One of the 90 benchmark perturbations: a kind at a severity in 1..=5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: Kind,
    pub severity: u8,
}

impl PerturbationSpec {
    pub fn new(kind: Kind, severity: u8) -> Result<PerturbationSpec, Error> {
        if !(1..=5).contains(&severity) {
            return Err(Error::UnsupportedSpec(format!(
                "severity must be 1..=5, got {severity}"
            )));
        }
        Ok(PerturbationSpec { kind, severity })
    }

    pub fn category(&self) -> Category {
        self.kind.category()
    }
}

impl fmt::Display for PerturbationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.severity)
    }
}

impl FromStr for PerturbationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<PerturbationSpec, Error> {
        let (kind, sev) = s
            .split_once(':')
            .ok_or_else(|| Error::UnsupportedSpec(format!("expected kind:severity, got {s:?}")))?;
        let severity: u8 = sev
            .parse()
            .map_err(|_| Error::UnsupportedSpec(format!("bad severity in {s:?}")))?;
        PerturbationSpec::new(kind.parse()?, severity)
    }
}

/// All 90 (kind, severity) pairs in canonical category order.
pub fn enumerate_specs() -> Vec<PerturbationSpec> {
    let mut out = Vec::with_capacity(90);
    for category in Category::ALL {
        for &kind in category.kinds() {
            for severity in 1..=5 {
                out.push(PerturbationSpec { kind, severity });
            }
        }
    }
    out
}
