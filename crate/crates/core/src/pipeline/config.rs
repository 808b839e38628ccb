//! Batch run configuration.
//!
//! The file is TOML. Top-level scalar keys, two optional tables and one
//! repeated `[[case]]` section:
//!
//! ```toml
//! output_dir = "out"                 # relative to the config file
//! delta_t = 0.00392156862745098      # default 1/255
//! algorithms = ["region_growing", "threshold", "hybrid"]
//! emit_masks = true
//! report_format = "csv"              # or "json"
//!
//! [preprocess]
//! stretch_low_pct = 1.0
//! stretch_high_pct = 99.0
//! median_window = 3
//! swt_levels = 1
//!
//! [grow]
//! tolerance = 0.1
//! connectivity = "eight"             # or "four"
//!
//! [[case]]
//! label = "slice-01"
//! image = "slice-01.pgm"
//! truth = "slice-01_truth.pgm"
//!
//! [[case]]
//! label = "phantom"
//! phantom_seed = 42                  # default phantom instead of files
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::PreprocessConfig;
use crate::segment::{RegionGrowParams, DEFAULT_DELTA_T};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    RegionGrowing,
    Threshold,
    Hybrid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::RegionGrowing,
        Algorithm::Threshold,
        Algorithm::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RegionGrowing => "region_growing",
            Algorithm::Threshold => "threshold",
            Algorithm::Hybrid => "hybrid",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseSource {
    Files { image: PathBuf, truth: PathBuf },
    Phantom { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub label: String,
    pub source: CaseSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cases: Vec<Case>,
    pub preprocess: PreprocessConfig,
    pub grow: RegionGrowParams,
    pub delta_t: f64,
    pub algorithms: Vec<Algorithm>,
    pub output_dir: PathBuf,
    pub emit_masks: bool,
    pub report_format: ReportFormat,
}

impl RunConfig {
    pub fn new(cases: Vec<Case>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            cases,
            preprocess: PreprocessConfig::default(),
            grow: RegionGrowParams::default(),
            delta_t: DEFAULT_DELTA_T,
            algorithms: Algorithm::ALL.to_vec(),
            output_dir: output_dir.into(),
            emit_masks: false,
            report_format: ReportFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(invalid("case", "at least one case is required"));
        }
        if let Some(c) = self.cases.iter().find(|c| c.label.is_empty()) {
            return Err(invalid("case.label", format!("empty label in case {c:?}")));
        }
        for (i, a) in self.cases.iter().enumerate() {
            if self.cases[..i].iter().any(|b| b.label == a.label) {
                return Err(invalid(
                    "case.label",
                    format!("duplicate label {:?}", a.label),
                ));
            }
        }
        if self.algorithms.is_empty() {
            return Err(invalid("algorithms", "at least one algorithm is required"));
        }
        if !(self.delta_t > 0.0 && self.delta_t.is_finite()) {
            return Err(invalid(
                "delta_t",
                format!("must be > 0, got {}", self.delta_t),
            ));
        }
        self.preprocess
            .validate()
            .map_err(|e| nest("preprocess", e))?;
        self.grow.validate().map_err(|e| nest("grow", e))?;
        Ok(())
    }
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        key: key.to_string(),
        message: message.into(),
    }
}

fn nest(table: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, message } => invalid(&format!("{table}.{name}"), message),
        other => other,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    label: String,
    image: Option<PathBuf>,
    truth: Option<PathBuf>,
    phantom_seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default, rename = "case")]
    cases: Vec<RawCase>,
    #[serde(default)]
    preprocess: PreprocessConfig,
    #[serde(default)]
    grow: RegionGrowParams,
    delta_t: Option<f64>,
    algorithms: Option<Vec<Algorithm>>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    emit_masks: bool,
    #[serde(default)]
    report_format: ReportFormat,
}

/// Parses config text; relative paths are resolved against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))?;

    let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
    let mut cases = Vec::with_capacity(raw.cases.len());
    for c in raw.cases {
        let source = match (c.image, c.truth, c.phantom_seed) {
            (Some(image), Some(truth), None) => CaseSource::Files {
                image: resolve(image),
                truth: resolve(truth),
            },
            (None, None, Some(seed)) => CaseSource::Phantom { seed },
            _ => {
                return Err(invalid(
                    "case",
                    format!(
                        "case {:?} needs either `image` + `truth` or `phantom_seed`",
                        c.label
                    ),
                ))
            }
        };
        cases.push(Case {
            label: c.label,
            source,
        });
    }

    let mut algorithms = raw.algorithms.unwrap_or_else(|| Algorithm::ALL.to_vec());
    let mut seen = Vec::new();
    algorithms.retain(|a| {
        let fresh = !seen.contains(a);
        seen.push(*a);
        fresh
    });

    let cfg = RunConfig {
        cases,
        preprocess: raw.preprocess,
        grow: raw.grow,
        delta_t: raw.delta_t.unwrap_or(DEFAULT_DELTA_T),
        algorithms,
        output_dir: resolve(raw.output_dir.unwrap_or_else(|| PathBuf::from("."))),
        emit_masks: raw.emit_masks,
        report_format: raw.report_format,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::ConfigMissing {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config_str(&text, base)
}
