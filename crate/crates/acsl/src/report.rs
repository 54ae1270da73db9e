//! Serialized results. Field order is fixed by the struct definitions and
//! floats are printed in shortest round-trip form, so a report is a
//! deterministic function of its inputs.

use std::path::Path;

use acsl_core::eval::MetricSummary;
use acsl_core::Hyperparams;
use serde::{Deserialize, Serialize};

use crate::config::EvalConfig;
use crate::error::{AppError, Result};
use crate::matrix_io::write_text;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewSummary {
    pub name: String,
    pub dims: usize,
    /// First column of the view in the stacked feature matrix.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub standardized: bool,
    pub views: Vec<ViewSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub converged: bool,
    pub iterations: usize,
    pub final_objective: f64,
    pub alpha_final: f64,
    pub components_final: usize,
    pub negative_weight_fraction: f64,
    pub diagonal_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub l: usize,
    /// Stacked column indices, best first.
    pub indices: Vec<usize>,
    /// Present when the dataset has labels and evaluation ran.
    pub metrics: Option<MetricSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsReport {
    pub schema_version: u32,
    pub dataset: DatasetSummary,
    pub hyperparams: Hyperparams,
    pub k_neighbors: usize,
    pub eval: Option<EvalConfig>,
    pub solver: SolverSummary,
    pub objective_trace: Vec<f64>,
    /// `‖P_i‖₂` for every stacked feature.
    pub feature_scores: Vec<f64>,
    pub selections: Vec<SelectionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Subdirectory holding this point's full outputs.
    pub dir: String,
    pub converged: bool,
    pub selections: Vec<SelectionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBest {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub l: usize,
    pub acc_mean: f64,
    pub nmi_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub schema_version: u32,
    pub dataset: String,
    pub values: Vec<f64>,
    pub points: Vec<GridPoint>,
    /// Highest mean ACC over every grid point and selection size.
    pub best: Option<GridBest>,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::Config(format!("serializing results: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}
