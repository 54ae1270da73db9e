use super::updates::{
    graph_terms, indicator_distances, initialize, objective, update_f, update_p, update_s, update_w,
};
use super::{Hyperparams, IterationRecord, SolverState};
use crate::error::Result;
use crate::graph::{connected_components, AffinityGraph, COMPONENT_THRESHOLD};
use crate::linalg::Matrix;

/// Result of one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub iteration: usize,
    /// Objective before the step.
    pub objective_before: f64,
    /// Objective after the P, F, last S and last W blocks, in that order.
    pub block_objectives: [f64; 4],
    pub relative_change: f64,
    pub components: usize,
    /// `alpha` was rescaled after this step (adaptive mode only).
    pub alpha_changed: bool,
}

impl StepReport {
    pub fn objective(&self) -> f64 {
        self.block_objectives[3]
    }
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub state: SolverState,
    pub converged: bool,
}

/// Drives the alternating updates over a fixed set of views and features.
pub struct Solver<'a> {
    views: &'a [AffinityGraph],
    x: &'a Matrix,
    hp: Hyperparams,
    state: SolverState,
}

impl<'a> Solver<'a> {
    pub fn new(views: &'a [AffinityGraph], x: &'a Matrix, hp: Hyperparams) -> Result<Self> {
        let state = initialize(views, x, &hp)?;
        Ok(Self {
            views,
            x,
            hp,
            state,
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hp
    }

    pub fn into_state(self) -> SolverState {
        self.state
    }

    /// One pass of `P → F → (S → W)*`.
    pub fn step(&mut self) -> Result<StepReport> {
        let (views, x, hp) = (self.views, self.x, &self.hp);
        let state = &mut self.state;
        let objective_before = state.history.last().map_or(f64::INFINITY, |r| r.objective);
        let mut block_objectives = [0.0; 4];

        let pu = update_p(state, x, hp)?;
        state.p = pu.p;
        state.gamma_diag = pu.gamma_diag;
        block_objectives[0] = objective(state, views, x, hp)?;

        let fu = update_f(state, x, hp)?;
        state.f = fu.f;
        state.p = fu.p;
        block_objectives[1] = objective(state, views, x, hp)?;

        // S and W share flat directions, so a single exchange per outer
        // step makes slow progress; alternate them until they settle
        let dists = indicator_distances(&state.f);
        let rest = block_objectives[1] - graph_terms(state, views, &dists);
        let mut sw_before = block_objectives[1];
        for _ in 0..hp.max_sw_iters {
            state.s = update_s(state, views)?;
            block_objectives[2] = rest + graph_terms(state, views, &dists);
            state.w = update_w(state, views)?;
            let after = rest + graph_terms(state, views, &dists);
            let drop = sw_before - after;
            sw_before = after;
            if drop <= hp.tol_inner * after.abs() {
                break;
            }
        }
        block_objectives[3] = objective(state, views, x, hp)?;

        let components = connected_components(&state.s, COMPONENT_THRESHOLD);
        state.iteration += 1;
        state.history.push(IterationRecord {
            iteration: state.iteration,
            objective: block_objectives[3],
            components,
            alpha: state.alpha,
        });

        let mut alpha_changed = false;
        if hp.adaptive_alpha {
            if components < hp.k {
                state.alpha *= 2.0;
                alpha_changed = true;
            } else if components > hp.k {
                state.alpha *= 0.5;
                alpha_changed = true;
            }
        }

        let after = block_objectives[3];
        let relative_change =
            (objective_before - after).abs() / objective_before.abs().max(f64::MIN_POSITIVE);
        Ok(StepReport {
            iteration: state.iteration,
            objective_before,
            block_objectives,
            relative_change,
            components,
            alpha_changed,
        })
    }

    /// Iterates until the relative objective change is below
    /// `tol_rel_objective` on a step that left `alpha` alone, or until
    /// `max_outer_iters`.
    pub fn run(mut self) -> Result<FitOutcome> {
        let mut converged = false;
        let mut last_alpha_changed = false;
        for _ in 0..self.hp.max_outer_iters {
            let report = self.step()?;
            // a change measured across an alpha rescale says nothing
            if !report.alpha_changed
                && !last_alpha_changed
                && report.relative_change < self.hp.tol_rel_objective
            {
                converged = true;
                break;
            }
            last_alpha_changed = report.alpha_changed;
        }
        Ok(FitOutcome {
            state: self.state,
            converged,
        })
    }
}

/// Initializes and runs the solver to convergence.
pub fn fit(views: &[AffinityGraph], x: &Matrix, hp: &Hyperparams) -> Result<FitOutcome> {
    Solver::new(views, x, hp.clone())?.run()
}
