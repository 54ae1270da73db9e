//! Clustering-based evaluation of a feature selection: repeated k-means on
//! the selected columns, scored by accuracy under optimal label matching and
//! by normalized mutual information.

mod kmeans;
mod metrics;

use alloc::vec::Vec;

use crate::error::{config_err, Result};
use crate::linalg::Matrix;

pub use kmeans::{kmeans, kmeans_with, KMeansOptions, KMeansResult};
pub use metrics::{clustering_accuracy, min_cost_assignment, nmi};

/// Mean and population standard deviation of ACC and NMI over k-means runs.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricSummary {
    pub acc_mean: f64,
    pub acc_std: f64,
    pub nmi_mean: f64,
    pub nmi_std: f64,
    pub runs: usize,
}

/// Metrics for one selection size, plus the solver diagnostics it came from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub acc_mean: f64,
    pub acc_std: f64,
    pub nmi_mean: f64,
    pub nmi_std: f64,
    pub runs: usize,
    pub selected_count: usize,
    pub objective_trace: Vec<f64>,
    pub components_final: usize,
}

impl EvalReport {
    pub fn new(
        summary: MetricSummary,
        selected_count: usize,
        objective_trace: Vec<f64>,
        components_final: usize,
    ) -> Self {
        Self {
            acc_mean: summary.acc_mean,
            acc_std: summary.acc_std,
            nmi_mean: summary.nmi_mean,
            nmi_std: summary.nmi_std,
            runs: summary.runs,
            selected_count,
            objective_trace,
            components_final,
        }
    }
}

/// Seed of run `run` derived from a base seed.
pub fn run_seed(seed: u64, run: usize) -> u64 {
    seed.wrapping_add((run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Clusters `data` `runs` times (one k-means++ seeding each) and summarizes
/// the agreement with `truth`.
pub fn evaluate_clustering(
    data: &Matrix,
    truth: &[usize],
    k: usize,
    runs: usize,
    seed: u64,
) -> Result<MetricSummary> {
    if runs == 0 {
        return Err(config_err!("evaluation needs at least one run"));
    }
    let mut accs = Vec::with_capacity(runs);
    let mut nmis = Vec::with_capacity(runs);
    for r in 0..runs {
        let result = kmeans(data, k, 1, run_seed(seed, r))?;
        accs.push(clustering_accuracy(&result.labels, truth)?);
        nmis.push(nmi(&result.labels, truth)?);
    }
    let (acc_mean, acc_std) = mean_std(&accs);
    let (nmi_mean, nmi_std) = mean_std(&nmis);
    Ok(MetricSummary {
        acc_mean,
        acc_std,
        nmi_mean,
        nmi_std,
        runs,
    })
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}
