use std::path::Path;

use acsl_core::{Matrix, MultiViewDataset};

use crate::error::{AppError, Result};
use crate::manifest::{resolve, DatasetManifest};
use crate::matrix_io::{read_labels, read_matrix};

/// A dataset as described by a manifest, ready for fitting.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub manifest: DatasetManifest,
    /// Per-view matrices as used by the solver (standardized if requested).
    pub data: MultiViewDataset,
    pub labels: Option<Vec<usize>>,
    pub view_names: Vec<String>,
}

impl LoadedDataset {
    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn d(&self) -> usize {
        self.data.d()
    }
}

/// Reads the manifest at `path` and every file it names.
pub fn load_dataset(path: &Path) -> Result<LoadedDataset> {
    let manifest = DatasetManifest::read(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    load_from_manifest(manifest, base, path)
}

/// Loads the files of `manifest`, resolving relative paths against `base`.
/// `origin` names the manifest in errors.
pub fn load_from_manifest(
    manifest: DatasetManifest,
    base: &Path,
    origin: &Path,
) -> Result<LoadedDataset> {
    let fail = |message: String| AppError::Manifest {
        path: origin.to_path_buf(),
        message,
    };
    let view_names: Vec<String> = manifest.views.iter().map(|v| v.label()).collect();

    let mut views: Vec<Matrix> = Vec::with_capacity(manifest.views.len());
    for (i, entry) in manifest.views.iter().enumerate() {
        let m = read_matrix(
            &resolve(base, &entry.path),
            entry.delimiter,
            entry.has_header,
        )?;
        if m.cols() != entry.dims {
            return Err(fail(format!(
                "view {} has {} columns, manifest says dims = {}",
                view_names[i],
                m.cols(),
                entry.dims
            )));
        }
        if let Some(first) = views.first() {
            if first.rows() != m.rows() {
                return Err(fail(format!(
                    "view {} has {} rows but view {} has {}",
                    view_names[i],
                    m.rows(),
                    view_names[0],
                    first.rows()
                )));
            }
        }
        views.push(m);
    }
    if views[0].rows() != manifest.n {
        return Err(fail(format!(
            "views have {} rows, manifest says n = {}",
            views[0].rows(),
            manifest.n
        )));
    }

    let labels = match &manifest.labels_path {
        Some(p) => {
            let labels = read_labels(&resolve(base, p))?;
            if labels.len() != manifest.n {
                return Err(fail(format!(
                    "{} labels for n = {} samples",
                    labels.len(),
                    manifest.n
                )));
            }
            Some(labels)
        }
        None => None,
    };

    let raw = MultiViewDataset::from_views(views).map_err(AppError::core("stacking views"))?;
    let data = if manifest.standardize {
        raw.standardized()
    } else {
        raw
    };
    Ok(LoadedDataset {
        manifest,
        data,
        labels,
        view_names,
    })
}
