//! The dataset manifest: a TOML file listing the view matrices of one
//! dataset and, optionally, ground-truth labels.
//!
//! ```toml
//! name = "toy"
//! n = 4
//! labels_path = "labels.txt"
//!
//! [[views]]
//! path = "color.csv"
//! dims = 2
//!
//! [[views]]
//! path = "texture.txt"
//! delimiter = "whitespace"
//! has_header = true
//! dims = 3
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::matrix_io::{write_text, Delimiter};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub name: String,
    /// Expected number of samples.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels_path: Option<PathBuf>,
    /// Z-score every column of every view before use.
    #[serde(default = "default_standardize")]
    pub standardize: bool,
    pub views: Vec<ViewEntry>,
}

fn default_standardize() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewEntry {
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub delimiter: Delimiter,
    #[serde(default)]
    pub has_header: bool,
    /// Expected number of feature columns.
    pub dims: usize,
}

impl ViewEntry {
    /// `name` if given, else the file stem.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.path.file_stem().map_or_else(
                || self.path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            )
        })
    }
}

impl DatasetManifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let manifest: Self = toml::from_str(text).map_err(|e| AppError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        manifest.validate(path)?;
        Ok(manifest)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| AppError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        write_text(path, &text)
    }

    fn validate(&self, path: &Path) -> Result<()> {
        let fail = |message: String| {
            Err(AppError::Manifest {
                path: path.to_path_buf(),
                message,
            })
        };
        if self.views.is_empty() {
            return fail("at least one [[views]] entry is required".into());
        }
        if self.n == 0 {
            return fail("n must be positive".into());
        }
        if let Some(v) = self.views.iter().find(|v| v.dims == 0) {
            return fail(format!("view {} declares dims = 0", v.label()));
        }
        Ok(())
    }
}

/// `path` joined onto `base` unless it is already absolute.
pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
