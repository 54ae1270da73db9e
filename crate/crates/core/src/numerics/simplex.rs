use alloc::vec::Vec;

use crate::error::{dim_err, Error, Result};

/// Tolerance on `|Σ x − 1|` for simplex members.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A point of the probability simplex: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(dim_err!("simplex vector must be non-empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("simplex vector"));
        }
        if let Some(v) = values.iter().find(|&&v| v < 0.0) {
            return Err(Error::Invariant(alloc::format!(
                "negative simplex entry {v:e}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Invariant(alloc::format!(
                "simplex entries sum to {sum}"
            )));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Euclidean projection of `v` onto `{x : x ≥ 0, Σx = 1}`.
///
/// Sort-based exact algorithm: with `u` sorted descending, the active set is
/// the longest prefix for which `u_ρ > (Σ_{i≤ρ} u_i − 1)/ρ`, and the result
/// is `max(v − θ, 0)` for that prefix's threshold `θ`.
pub fn project_simplex(v: &[f64]) -> Result<SimplexVector> {
    if v.is_empty() {
        return Err(dim_err!("cannot project an empty vector onto the simplex"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("simplex projection input"));
    }
    Ok(SimplexVector(project_unchecked(v)))
}

pub(crate) fn project_unchecked(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));

    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    let mut x: Vec<f64> = v.iter().map(|&vi| (vi - theta).max(0.0)).collect();

    // absorb rounding so the sum is 1 to machine precision
    let sum: f64 = x.iter().sum();
    if sum > 0.0 && (sum - 1.0).abs() > 4.0 * f64::EPSILON * x.len() as f64 {
        x.iter_mut().for_each(|xi| *xi /= sum);
    }
    x
}
