//! The alternating-minimization engine.
//!
//! One outer iteration runs the block updates in the order `P → F → S → W`.
//! Each block minimizes the full objective (or a tight majorizer of it) over
//! its own variables, so for fixed hyperparameters the objective trace is
//! non-increasing.

mod fit;
mod updates;

use alloc::vec::Vec;

use crate::error::{config_err, Result};
use crate::graph::AffinityGraph;
use crate::linalg::Matrix;

pub use fit::{fit, FitOutcome, Solver, StepReport};
pub use updates::{
    f_operator, initialize, objective, objective_terms, reweighting, solve_projection,
    sparse_regression_objective, update_f, update_p, update_s, update_w, FUpdate, ObjectiveTerms,
    PUpdate,
};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Hyperparams {
    /// Weight of the rank surrogate `Tr(Fᵀ L_S F)`.
    pub alpha: f64,
    /// Weight of the sparse regression term.
    pub beta: f64,
    /// Weight of `‖P‖₂,₁` inside the regression term.
    pub gamma: f64,
    /// Number of clusters, and columns of `F` and `P`.
    pub k: usize,
    /// Smoothing inside the reweighting `Γ_ii = 1/(2√(‖P_i‖² + ε))`.
    pub epsilon: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    /// Cap on `S`/`W` exchanges per outer step.
    pub max_sw_iters: usize,
    /// Outer loop stops once the relative objective change falls below this.
    pub tol_rel_objective: f64,
    /// The reweighting loop and the `S`/`W` exchange stop once their relative
    /// change falls below this.
    pub tol_inner: f64,
    /// Double `alpha` while `S` has fewer than `k` components and halve it
    /// while it has more.
    pub adaptive_alpha: bool,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            k: 2,
            epsilon: 1e-8,
            max_outer_iters: 100,
            max_inner_iters: 30,
            max_sw_iters: 50,
            tol_rel_objective: 1e-6,
            tol_inner: 1e-8,
            adaptive_alpha: false,
        }
    }
}

impl Hyperparams {
    pub fn with_clusters(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_err!(
                    "{} must be positive and finite, got {}",
                    name,
                    v
                ))
            }
        };
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        positive("gamma", self.gamma)?;
        positive("epsilon", self.epsilon)?;
        positive("tol_rel_objective", self.tol_rel_objective)?;
        positive("tol_inner", self.tol_inner)?;
        if self.k < 2 {
            return Err(config_err!("k must be at least 2, got {}", self.k));
        }
        if self.max_outer_iters == 0 || self.max_inner_iters == 0 || self.max_sw_iters == 0 {
            return Err(config_err!("iteration caps must be at least 1"));
        }
        Ok(())
    }
}

/// One entry of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord {
    /// 0 for the initial state.
    pub iteration: usize,
    pub objective: f64,
    pub components: usize,
    /// The `alpha` the objective was evaluated with.
    pub alpha: f64,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    /// `d × k` projection.
    pub p: Matrix,
    /// `N × k` relaxed cluster indicator, orthonormal columns.
    pub f: Matrix,
    /// Collaborative similarity structure.
    pub s: AffinityGraph,
    /// `V × N` view weights; column `j` sums to one.
    pub w: Matrix,
    /// Diagonal of the reweighting matrix Γ.
    pub gamma_diag: Vec<f64>,
    /// Current rank-surrogate weight (differs from the configured one only
    /// under adaptive alpha).
    pub alpha: f64,
    pub iteration: usize,
    pub history: Vec<IterationRecord>,
}

/// Worst violations of the state constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResiduals {
    /// `max |FᵀF − I|`.
    pub orthonormality: f64,
    /// Worst column-sum error or negative entry of `S`.
    pub simplex: f64,
    /// `max |1ᵀ W_j − 1|`.
    pub weight_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostics {
    pub components: usize,
    /// Fraction of `W` entries that are negative.
    pub negative_weight_fraction: f64,
    /// Mean of `S_jj`.
    pub diagonal_mass: f64,
}

impl SolverState {
    pub fn objective_trace(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.objective).collect()
    }

    pub fn constraint_residuals(&self) -> ConstraintResiduals {
        let ftf = self.f.gram();
        let mut orthonormality: f64 = 0.0;
        for i in 0..ftf.rows() {
            for j in 0..ftf.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                orthonormality = orthonormality.max((ftf[(i, j)] - target).abs());
            }
        }
        let mut weight_sum: f64 = 0.0;
        for j in 0..self.w.cols() {
            let sum: f64 = (0..self.w.rows()).map(|v| self.w[(v, j)]).sum();
            weight_sum = weight_sum.max((sum - 1.0).abs());
        }
        ConstraintResiduals {
            orthonormality,
            simplex: self.s.simplex_violation(),
            weight_sum,
        }
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let w = self.w.as_slice();
        let negative = w.iter().filter(|&&v| v < 0.0).count();
        Diagnostics {
            components: crate::graph::connected_components(
                &self.s,
                crate::graph::COMPONENT_THRESHOLD,
            ),
            negative_weight_fraction: negative as f64 / w.len().max(1) as f64,
            diagonal_mass: self.s.diagonal_mass(),
        }
    }
}
