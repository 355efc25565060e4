//! JSON scenario files.
//!
//! ```json
//! {
//!   "input":  { "labels": ["x0", "x1"], "eps": [0, 0], "a": {"x0": 0, "x1": 1},
//!               "amp_re": [0.7071067811865476, 0.7071067811865476] },
//!   "output": { "E": [0, 0], "b": [1, -1],
//!               "c0_re": [0.7071067811865476, 0.7071067811865476] },
//!   "coupling": { "C": 1, "profile": { "kind": "constant" } },
//!   "pairs": [["x0", "x1"]],
//!   "hbar": 1
//! }
//! ```
//!
//! Per-label quantities (`eps`, `a`, `amp_re`, `amp_im`, and `a` inside a
//! coupling term) may be arrays in label order or objects keyed by label.
//! Imaginary parts, `eps` and `E` default to zero.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::drive::DriveProfile;
use crate::error::ModelError;
use crate::model::{
    Coupling, CouplingSpec, CouplingTerm, InputRegister, OracleScenario, OutputRegister, Pair,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerLabel {
    List(Vec<f64>),
    Map(BTreeMap<String, f64>),
}

impl PerLabel {
    fn resolve(&self, labels: &[String], key: &str) -> Result<Vec<f64>, ModelError> {
        match self {
            PerLabel::List(v) => {
                if v.len() != labels.len() {
                    return Err(ModelError::DimensionMismatch(format!(
                        "{key} has {} entries for {} labels",
                        v.len(),
                        labels.len()
                    )));
                }
                Ok(v.clone())
            }
            PerLabel::Map(m) => {
                if let Some(extra) = m.keys().find(|k| !labels.contains(k)) {
                    return Err(ModelError::UnknownLabel(extra.clone()));
                }
                labels
                    .iter()
                    .map(|l| {
                        m.get(l).copied().ok_or_else(|| {
                            ModelError::DimensionMismatch(format!("{key} is missing label `{l}`"))
                        })
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<PerLabel>,
    pub a: PerLabel,
    pub amp_re: PerLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp_im: Option<PerLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    pub b: Vec<f64>,
    pub c0_re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0_im: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    #[serde(rename = "C")]
    pub strength: f64,
    pub a: PerLabel,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingFile {
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermFile>>,
    #[serde(default, skip_serializing_if = "DriveProfile::is_constant")]
    pub profile: DriveProfile,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub input: InputFile,
    pub output: OutputFile,
    pub coupling: CouplingFile,
    pub pairs: Vec<[String; 2]>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Validates a parsed file and builds the scenario.
pub fn build_scenario(raw: &ScenarioFile) -> Result<OracleScenario, ModelError> {
    let labels = raw.input.labels.clone();
    let n = labels.len();
    let eps = match &raw.input.eps {
        Some(e) => e.resolve(&labels, "input.eps")?,
        None => vec![0.0; n],
    };
    let a = raw.input.a.resolve(&labels, "input.a")?;
    let amp_re = raw.input.amp_re.resolve(&labels, "input.amp_re")?;
    let amp_im = match &raw.input.amp_im {
        Some(v) => v.resolve(&labels, "input.amp_im")?,
        None => vec![0.0; n],
    };
    let amp = amp_re
        .iter()
        .zip(&amp_im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    let input = InputRegister::new(labels.clone(), eps, a, amp)?;

    let d = raw.output.b.len();
    let energies = raw.output.energies.clone().unwrap_or_else(|| vec![0.0; d]);
    let c0_im = raw
        .output
        .c0_im
        .clone()
        .unwrap_or_else(|| vec![0.0; raw.output.c0_re.len()]);
    if c0_im.len() != raw.output.c0_re.len() {
        return Err(ModelError::DimensionMismatch(
            "output.c0_im and output.c0_re differ in length".into(),
        ));
    }
    let c0 = raw
        .output
        .c0_re
        .iter()
        .zip(&c0_im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    let output = OutputRegister::new(energies, raw.output.b.clone(), c0)?;

    let coupling = match (&raw.coupling.strength, &raw.coupling.terms) {
        (Some(c), None) => CouplingSpec::single(*c),
        (None, Some(terms)) => {
            let terms = terms
                .iter()
                .map(|t| {
                    Ok(CouplingTerm {
                        strength: t.strength,
                        a: t.a.resolve(&labels, "coupling.terms.a")?,
                        b: t.b.clone(),
                    })
                })
                .collect::<Result<Vec<_>, ModelError>>()?;
            CouplingSpec::multi(terms)
        }
        _ => {
            return Err(ModelError::DimensionMismatch(
                "coupling needs exactly one of `C` or `terms`".into(),
            ));
        }
    }
    .with_profile(raw.coupling.profile.clone());

    let index = |l: &String| {
        input
            .index_of(l)
            .ok_or_else(|| ModelError::UnknownLabel(l.clone()))
    };
    let pairs = raw
        .pairs
        .iter()
        .map(|[x, y]| Ok(Pair::new(index(x)?, index(y)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    OracleScenario::new(input, output, coupling, pairs, raw.hbar)
}

/// Inverse of [`build_scenario`], arrays throughout.
pub fn to_file(s: &OracleScenario) -> ScenarioFile {
    let labels = s.input().labels().to_vec();
    let amp = s.input().amp();
    let c0 = s.output().c0();
    let coupling = match &s.coupling().coupling {
        Coupling::Single { strength } => CouplingFile {
            strength: Some(*strength),
            terms: None,
            profile: s.coupling().profile.clone(),
        },
        Coupling::Multi { terms } => CouplingFile {
            strength: None,
            terms: Some(
                terms
                    .iter()
                    .map(|t| TermFile {
                        strength: t.strength,
                        a: PerLabel::List(t.a.clone()),
                        b: t.b.clone(),
                    })
                    .collect(),
            ),
            profile: s.coupling().profile.clone(),
        },
    };
    ScenarioFile {
        input: InputFile {
            labels: labels.clone(),
            eps: Some(PerLabel::List(s.input().eps().to_vec())),
            a: PerLabel::List(s.input().a().to_vec()),
            amp_re: PerLabel::List(amp.iter().map(|c| c.re).collect()),
            amp_im: Some(PerLabel::List(amp.iter().map(|c| c.im).collect())),
        },
        output: OutputFile {
            energies: Some(s.output().energies().to_vec()),
            b: s.output().bsigned().to_vec(),
            c0_re: c0.iter().map(|c| c.re).collect(),
            c0_im: Some(c0.iter().map(|c| c.im).collect()),
        },
        coupling,
        pairs: s
            .pairs()
            .iter()
            .map(|p| [labels[p.x].clone(), labels[p.y].clone()])
            .collect(),
        hbar: s.hbar(),
    }
}

pub fn parse_scenario(text: &str) -> Result<OracleScenario, LoadError> {
    let raw: ScenarioFile = serde_json::from_str(text)?;
    Ok(build_scenario(&raw)?)
}

/// A loaded scenario together with the SHA-256 of the file contents.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: OracleScenario,
    pub digest: String,
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario, LoadError> {
    let bytes = std::fs::read(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    Ok(LoadedScenario {
        scenario: parse_scenario(&text)?,
        digest: digest(&bytes),
    })
}

/// Lowercase hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
