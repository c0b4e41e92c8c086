//! JSON tensor files and machine-readable reports.
//!
//! A tensor file lists its nonzero entries with **1-based** multi-indices:
//!
//! ```json
//! { "order": 3, "dim": 2, "name": "example",
//!   "entries": [ { "idx": [1, 1, 1], "val": 2.0 },
//!                { "idx": [2, 1, 1], "val": -1.0 } ] }
//! ```
//!
//! Unlisted entries are zero. Reals are written in shortest round-trip form,
//! so `save_tensor` followed by `load_tensor` reproduces every entry bit for
//! bit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::classify::ClassReport;
use crate::decompose::{Certificate, Decomposition, HEigenReport};
use crate::oracle::{OracleResult, SearchReport};
use crate::tensor::{MultiIndex, Tensor, TensorError};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: TensorError },
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub idx: Vec<usize>,
    pub val: f64,
}

/// On-disk form of a [`Tensor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub order: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub entries: Vec<EntryRecord>,
}

impl TensorDocument {
    pub fn from_tensor(t: &Tensor, name: Option<String>) -> Self {
        TensorDocument {
            order: t.order(),
            dim: t.dim(),
            name,
            entries: t
                .nonzero_entries()
                .map(|(idx, val)| EntryRecord {
                    idx: idx.as_slice().to_vec(),
                    val,
                })
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<Tensor, TensorError> {
        let entries: Vec<(MultiIndex, f64)> = self
            .entries
            .iter()
            .map(|e| (MultiIndex::from(e.idx.clone()), e.val))
            .collect();
        Tensor::from_sparse(self.order, self.dim, &entries)
    }
}

impl From<Tensor> for TensorDocument {
    fn from(t: Tensor) -> Self {
        TensorDocument::from_tensor(&t, None)
    }
}

impl TryFrom<TensorDocument> for Tensor {
    type Error = TensorError;

    fn try_from(doc: TensorDocument) -> Result<Self, Self::Error> {
        doc.to_tensor()
    }
}

/// A tensor read from disk, with any non-fatal warnings.
#[derive(Debug, Clone)]
pub struct LoadedTensor {
    pub tensor: Tensor,
    pub name: Option<String>,
    pub warnings: Vec<String>,
}

pub fn parse_tensor(text: &str, path: &Path) -> Result<LoadedTensor, IoError> {
    let doc: TensorDocument = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let tensor = doc.to_tensor().map_err(|source| IoError::Invalid {
        path: path.to_path_buf(),
        source,
    })?;
    let mut warnings = Vec::new();
    if let Some((a, b)) = tensor.symmetry_violation() {
        warnings.push(format!(
            "{}: tensor is not symmetric (entry {a} = {} but {b} = {})",
            path.display(),
            tensor.get(a.as_slice()),
            tensor.get(b.as_slice())
        ));
    }
    Ok(LoadedTensor {
        tensor,
        name: doc.name,
        warnings,
    })
}

/// Reads a tensor file. A non-symmetric tensor is a warning, not an error.
pub fn load_tensor_with_warnings(path: impl AsRef<Path>) -> Result<LoadedTensor, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_tensor(&text, path)
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<Tensor, IoError> {
    load_tensor_with_warnings(path).map(|l| l.tensor)
}

pub fn tensor_to_json(t: &Tensor, name: Option<&str>) -> Result<String, IoError> {
    let doc = TensorDocument::from_tensor(t, name.map(str::to_owned));
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn save_tensor(t: &Tensor, name: Option<&str>, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut text = tensor_to_json(t, name)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Shape, nonzero count and SHA-256 of the dense entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub order: usize,
    pub dim: usize,
    pub entry_count: usize,
    pub content_hash: String,
}

impl InputDigest {
    pub fn of(t: &Tensor) -> Self {
        let mut hasher = Sha256::new();
        hasher.update((t.order() as u64).to_le_bytes());
        hasher.update((t.dim() as u64).to_le_bytes());
        for v in t.entries() {
            hasher.update(v.to_bits().to_le_bytes());
        }
        let content_hash = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        InputDigest {
            order: t.order(),
            dim: t.dim(),
            entry_count: t.nonzero_entries().count(),
            content_hash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: TOOL_NAME.to_owned(),
            version: TOOL_VERSION.to_owned(),
        }
    }
}

/// Flags a report was produced with. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunFlags {
    pub seed: u64,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0_requires_diagonal: Option<bool>,
}

/// Everything a CLI run reports. Contains no timestamps, so identical inputs
/// and flags give byte-identical documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub command: String,
    pub flags: RunFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
    /// Minimum over `‖x‖_m = 1` (even order only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<OracleResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_eigen: Option<HEigenReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
}

impl ReportDocument {
    pub fn new(command: &str, flags: RunFlags) -> Self {
        ReportDocument {
            tool: ToolInfo::default(),
            command: command.to_owned(),
            flags,
            input: None,
            classification: None,
            certificate: None,
            decomposition: None,
            oracle: None,
            lambda_min: None,
            h_eigen: None,
            search: None,
        }
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}
