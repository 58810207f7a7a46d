//! Fan and problem files (JSON).
//!
//! Fan file: `dim`, `rays`, `max_cones` (1-based ray indices), optional
//! `variables`, optional `degree_basis`. Problem file: `fan` (path relative
//! to the problem file, or an inline fan record), `F`, `order`, optional
//! `sigma` (1-based) and optional `H`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{Completeness, FanData, FanError};
use crate::grading::{Grading, GradingError};
use crate::groebner::{MonomialOrder, OrderError};
use crate::intmat::IntMatrix;
use crate::poly::{MultiPoly, PolyError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {msg}")]
    Read { path: PathBuf, msg: String },
    #[error("malformed file {path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid degree basis: {0}")]
    Grading(#[from] GradingError),
    #[error("bad polynomial `{text}`: {err}")]
    Poly { text: String, err: PolyError },
    #[error("bad order: {0}")]
    Order(#[from] OrderError),
    #[error("sigma = {sigma} out of range (fan has {count} maximal cones)")]
    BadSigma { sigma: usize, count: usize },
}

impl IoError {
    /// Process exit code: 2 for parse errors, 3 for invalid fans.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::InvalidFan(_) | IoError::Grading(_) => 3,
            _ => 2,
        }
    }
}

impl From<FanError> for IoError {
    fn from(e: FanError) -> Self {
        IoError::InvalidFan(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub dim: usize,
    pub rays: IntMatrix,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_basis: Option<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Path(String),
    Inline(FanFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub fan: FanRef,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    pub order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<usize>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<String>>,
}

/// A validated fan (simplicial and complete) with its grading.
#[derive(Clone, Debug)]
pub struct LoadedFan {
    pub fan: FanData,
    pub grading: Grading,
}

#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub fan: FanData,
    pub grading: Grading,
    pub f: Vec<MultiPoly>,
    pub order: MonomialOrder,
    /// 0-based maximal cone index (default: the first).
    pub sigma: usize,
    pub h: Vec<MultiPoly>,
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read { path: path.to_path_buf(), msg: e.to_string() })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FanFile {
    /// Validate the record: lattice data, simplicial, complete, grading.
    pub fn build(&self) -> Result<LoadedFan, IoError> {
        let mut cones = Vec::with_capacity(self.max_cones.len());
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.contains(&0) {
                return Err(IoError::InvalidFan(format!("cone {} uses index 0; ray indices are 1-based", c + 1)));
            }
            cones.push(cone.iter().map(|&i| i - 1).collect());
        }
        if let Some(vars) = &self.variables {
            if let Some(bad) = vars.iter().find(|v| !is_identifier(v)) {
                return Err(IoError::InvalidFan(format!("variable name `{bad}` is not an identifier")));
            }
        }
        let fan = FanData::new(self.dim, self.rays.clone(), cones, self.variables.clone())?;
        match fan.completeness() {
            Completeness::Complete => {}
            other => return Err(IoError::InvalidFan(other.to_string())),
        }
        let grading = match &self.degree_basis {
            Some(rows) => Grading::validate_user(&fan, rows)?,
            None => Grading::compute(&fan)?,
        };
        Ok(LoadedFan { fan, grading })
    }
}

pub fn parse_fan(text: &str, path: &Path) -> Result<LoadedFan, IoError> {
    let file: FanFile =
        serde_json::from_str(text).map_err(|e| IoError::Parse { path: path.to_path_buf(), msg: e.to_string() })?;
    file.build()
}

pub fn load_fan(path: &Path) -> Result<LoadedFan, IoError> {
    parse_fan(&read(path)?, path)
}

pub fn parse_polys(texts: &[String], names: &[String]) -> Result<Vec<MultiPoly>, IoError> {
    texts.iter().map(|t| MultiPoly::parse(t, names).map_err(|err| IoError::Poly { text: t.clone(), err })).collect()
}

pub fn load_problem(path: &Path) -> Result<LoadedProblem, IoError> {
    let text = read(path)?;
    let file: ProblemFile =
        serde_json::from_str(&text).map_err(|e| IoError::Parse { path: path.to_path_buf(), msg: e.to_string() })?;
    let loaded = match &file.fan {
        FanRef::Inline(f) => f.build()?,
        FanRef::Path(p) => {
            let base = path.parent().unwrap_or(Path::new("."));
            load_fan(&base.join(p))?
        }
    };
    let names = loaded.fan.variables().to_vec();
    let f = parse_polys(&file.f, &names)?;
    let order = MonomialOrder::parse(&file.order, &names)?;
    let count = loaded.fan.max_cones().len();
    let sigma = match file.sigma {
        None => 0,
        Some(s) if s >= 1 && s <= count => s - 1,
        Some(s) => return Err(IoError::BadSigma { sigma: s, count }),
    };
    let h = parse_polys(file.h.as_deref().unwrap_or(&[]), &names)?;
    Ok(LoadedProblem { fan: loaded.fan, grading: loaded.grading, f, order, sigma, h })
}

/// Directory holding the bundled fixtures.
pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
