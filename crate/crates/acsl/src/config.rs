use std::fs;
use std::path::{Path, PathBuf};

use acsl_core::Hyperparams;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

/// Environment variable that replaces `output_dir` when set.
pub const OUTPUT_DIR_ENV: &str = "ACSL_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// k-means runs per selection size; mean and std are reported over them.
    pub kmeans_restarts: usize,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            kmeans_restarts: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Candidate values shared by alpha, beta and gamma.
    pub values: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            values: (-4..=4).map(|e| 10f64.powi(e)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub hyperparams: Hyperparams,
    pub k_neighbors: usize,
    /// Selection sizes to evaluate. Empty means one tenth of the features.
    pub l_grid: Vec<usize>,
    pub eval: EvalConfig,
    pub grid: GridConfig,
    pub output_dir: PathBuf,
    /// Exit with status 4 when the solver hits its iteration cap.
    pub fail_on_nonconvergence: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hyperparams: Hyperparams::default(),
            k_neighbors: 10,
            l_grid: Vec::new(),
            eval: EvalConfig::default(),
            grid: GridConfig::default(),
            output_dir: PathBuf::from("acsl-out"),
            fail_on_nonconvergence: false,
        }
    }
}

impl RunConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        toml::from_str(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies the output-directory environment override.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.output_dir = PathBuf::from(dir);
        }
        self
    }

    /// The selection sizes for a dataset with `d` features.
    pub fn resolved_l_grid(&self, d: usize) -> Vec<usize> {
        if self.l_grid.is_empty() {
            vec![(d / 10).max(1)]
        } else {
            self.l_grid.clone()
        }
    }

    pub fn validate(&self, n: usize, d: usize) -> Result<()> {
        self.hyperparams
            .validate()
            .map_err(AppError::core("hyperparameters"))?;
        if self.k_neighbors == 0 || self.k_neighbors >= n {
            return Err(AppError::Config(format!(
                "k_neighbors = {} must be in 1..{}",
                self.k_neighbors, n
            )));
        }
        if let Some(&l) = self.resolved_l_grid(d).iter().find(|&&l| l == 0 || l > d) {
            return Err(AppError::Config(format!(
                "l_grid entry {l} must be in 1..={d}"
            )));
        }
        if self.eval.kmeans_restarts == 0 {
            return Err(AppError::Config(
                "eval.kmeans_restarts must be positive".into(),
            ));
        }
        if self.grid.values.is_empty()
            || self
                .grid
                .values
                .iter()
                .any(|v| !(v.is_finite() && *v > 0.0))
        {
            return Err(AppError::Config(
                "grid.values must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}
