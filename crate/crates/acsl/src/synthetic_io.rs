use std::path::{Path, PathBuf};

use acsl_core::SyntheticData;

use crate::error::Result;
use crate::manifest::{DatasetManifest, ViewEntry};
use crate::matrix_io::{write_indices, write_matrix, Delimiter};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const LABELS_FILE: &str = "labels.txt";
/// Ground-truth informative columns of the stacked matrix.
pub const INFORMATIVE_FILE: &str = "informative.txt";

/// Writes one CSV per view plus labels, informative columns and a manifest
/// into `dir`. Returns the manifest path.
pub fn write_synthetic(
    data: &SyntheticData,
    name: &str,
    dir: &Path,
    standardize: bool,
) -> Result<PathBuf> {
    let mut views = Vec::with_capacity(data.dataset.num_views());
    for (v, m) in data.dataset.views().iter().enumerate() {
        let file = format!("view{v}.csv");
        write_matrix(&dir.join(&file), m, Delimiter::default())?;
        views.push(ViewEntry {
            path: PathBuf::from(file),
            name: Some(format!("view{v}")),
            delimiter: Delimiter::default(),
            has_header: false,
            dims: m.cols(),
        });
    }
    write_indices(&dir.join(LABELS_FILE), &data.labels)?;
    write_indices(&dir.join(INFORMATIVE_FILE), &data.informative)?;
    let manifest = DatasetManifest {
        name: name.to_owned(),
        n: data.dataset.n(),
        labels_path: Some(PathBuf::from(LABELS_FILE)),
        standardize,
        views,
    };
    let path = dir.join(MANIFEST_FILE);
    manifest.write(&path)?;
    Ok(path)
}
