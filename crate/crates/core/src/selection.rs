//! Feature ranking from the learned projection.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, dim_err, Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureRanking {
    /// `‖P_i‖₂` for every feature dimension.
    pub scores: Vec<f64>,
    /// Feature indices by descending score; ties keep index order.
    pub order: Vec<usize>,
    /// View each feature dimension belongs to.
    pub view_of: Vec<usize>,
}

impl FeatureRanking {
    /// Attaches the view layout of the stacked feature matrix.
    pub fn with_view_of(mut self, view_of: Vec<usize>) -> Result<Self> {
        if view_of.len() != self.scores.len() {
            return Err(dim_err!(
                "view layout has {} entries for {} features",
                view_of.len(),
                self.scores.len()
            ));
        }
        self.view_of = view_of;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Scores every row of `p` by its Euclidean norm and sorts descending.
pub fn rank_features(p: &Matrix) -> Result<FeatureRanking> {
    if !p.is_finite() {
        return Err(Error::NonFinite("projection matrix"));
    }
    let scores = p.row_norms();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps lower indices first among equal scores
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let view_of = vec![0; scores.len()];
    Ok(FeatureRanking {
        scores,
        order,
        view_of,
    })
}

/// The `l` top-ranked feature indices.
pub fn select_top(ranking: &FeatureRanking, l: usize) -> Result<Vec<usize>> {
    if l == 0 || l > ranking.len() {
        return Err(config_err!(
            "cannot select {} of {} features",
            l,
            ranking.len()
        ));
    }
    Ok(ranking.order[..l].to_vec())
}
