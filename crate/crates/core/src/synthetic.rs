//! Multi-view data model and a seeded Gaussian-blob generator with known
//! informative dimensions.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{config_err, dim_err, Result};
use crate::linalg::Matrix;

/// Per-view feature matrices (rows = samples) and their horizontal stack.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiViewDataset {
    views: Vec<Matrix>,
    x: Matrix,
    offsets: Vec<usize>,
    view_of: Vec<usize>,
}

impl MultiViewDataset {
    pub fn from_views(views: Vec<Matrix>) -> Result<Self> {
        if views.is_empty() {
            return Err(config_err!("a dataset needs at least one view"));
        }
        let n = views[0].rows();
        for (v, m) in views.iter().enumerate() {
            if m.rows() != n {
                return Err(dim_err!(
                    "view {} has {} rows, view 0 has {}",
                    v,
                    m.rows(),
                    n
                ));
            }
            if m.cols() == 0 {
                return Err(dim_err!("view {} has no feature columns", v));
            }
        }
        let x = Matrix::hstack(&views)?;
        let mut offsets = Vec::with_capacity(views.len());
        let mut view_of = Vec::with_capacity(x.cols());
        let mut at = 0;
        for (v, m) in views.iter().enumerate() {
            offsets.push(at);
            at += m.cols();
            view_of.extend(core::iter::repeat_n(v, m.cols()));
        }
        Ok(Self {
            views,
            x,
            offsets,
            view_of,
        })
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }

    pub fn num_views(&self) -> usize {
        self.views.len()
    }

    pub fn views(&self) -> &[Matrix] {
        &self.views
    }

    /// The stacked `N × d` matrix.
    pub fn stacked(&self) -> &Matrix {
        &self.x
    }

    /// First stacked column of each view.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// View index of each stacked column.
    pub fn view_of(&self) -> &[usize] {
        &self.view_of
    }

    /// Z-scores every column of every view. Constant columns become zero.
    pub fn standardized(&self) -> Self {
        let views: Vec<Matrix> = self.views.iter().map(standardize_columns).collect();
        Self::from_views(views).expect("standardizing keeps the layout")
    }
}

fn standardize_columns(m: &Matrix) -> Matrix {
    let (n, d) = m.shape();
    let mut out = m.clone();
    for c in 0..d {
        let mean = (0..n).map(|i| m[(i, c)]).sum::<f64>() / n as f64;
        let var = (0..n)
            .map(|i| (m[(i, c)] - mean) * (m[(i, c)] - mean))
            .sum::<f64>()
            / n as f64;
        let sd = libm::sqrt(var);
        for i in 0..n {
            out[(i, c)] = if sd > 0.0 {
                (m[(i, c)] - mean) / sd
            } else {
                0.0
            };
        }
    }
    out
}

/// Shape of one generated view.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ViewSpec {
    pub dims: usize,
    /// Within-cluster standard deviation on the informative dimensions.
    pub noise_level: f64,
    /// Share of `dims` carrying cluster structure, rounded to the nearest
    /// integer count.
    pub informative_fraction: f64,
}

impl ViewSpec {
    pub fn new(dims: usize, noise_level: f64, informative_fraction: f64) -> Self {
        Self {
            dims,
            noise_level,
            informative_fraction,
        }
    }

    pub fn informative_count(&self) -> usize {
        libm::round(self.informative_fraction * self.dims as f64) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub dataset: MultiViewDataset,
    pub labels: Vec<usize>,
    /// Informative columns of the stacked matrix, ascending.
    pub informative: Vec<usize>,
    /// Informative columns per view, in view-local indices.
    pub informative_per_view: Vec<Vec<usize>>,
}

/// Generates `k` Gaussian blobs of `n_per_cluster` samples, observed through
/// each view in `views`.
///
/// On a view's informative dimensions a sample is its cluster centre (drawn
/// from `N(0, 1)`) plus `noise_level · N(0, 1)`; the remaining dimensions are
/// pure `N(0, 1)` noise. Sample order is shuffled.
pub fn generate_synthetic(
    n_per_cluster: usize,
    k: usize,
    views: &[ViewSpec],
    seed: u64,
) -> Result<SyntheticData> {
    if n_per_cluster == 0 || k == 0 || views.is_empty() {
        return Err(config_err!(
            "need positive cluster size, cluster count and at least one view"
        ));
    }
    for (v, spec) in views.iter().enumerate() {
        if spec.dims == 0
            || !(0.0..=1.0).contains(&spec.informative_fraction)
            || !(spec.noise_level >= 0.0 && spec.noise_level.is_finite())
        {
            return Err(config_err!("view {} has an invalid spec {:?}", v, spec));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_per_cluster * k;
    let mut labels: Vec<usize> = (0..n).map(|i| i / n_per_cluster).collect();
    labels.shuffle(&mut rng);

    let mut matrices = Vec::with_capacity(views.len());
    let mut informative_per_view = Vec::with_capacity(views.len());
    for spec in views {
        let mut dims: Vec<usize> = (0..spec.dims).collect();
        dims.shuffle(&mut rng);
        let mut informative: Vec<usize> = dims[..spec.informative_count()].to_vec();
        informative.sort_unstable();

        let centers: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                (0..informative.len())
                    .map(|_| rng.sample(StandardNormal))
                    .collect()
            })
            .collect();

        let mut is_informative = vec![None; spec.dims];
        for (slot, &c) in informative.iter().enumerate() {
            is_informative[c] = Some(slot);
        }
        let mut m = Matrix::zeros(n, spec.dims);
        for (i, &label) in labels.iter().enumerate() {
            for (c, slot) in is_informative.iter().enumerate() {
                let z: f64 = rng.sample(StandardNormal);
                m[(i, c)] = match slot {
                    Some(s) => centers[label][*s] + spec.noise_level * z,
                    None => z,
                };
            }
        }
        matrices.push(m);
        informative_per_view.push(informative);
    }

    let dataset = MultiViewDataset::from_views(matrices)?;
    let informative = informative_per_view
        .iter()
        .zip(dataset.offsets())
        .flat_map(|(cols, &off)| cols.iter().map(move |c| c + off))
        .collect();
    Ok(SyntheticData {
        dataset,
        labels,
        informative,
        informative_per_view,
    })
}
