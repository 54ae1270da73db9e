//! Adaptive collaborative similarity learning for unsupervised multi-view
//! feature selection.
//!
//! Given `V` views of the same `N` samples, the solver fuses per-view
//! affinity graphs into one collaborative similarity structure `S` whose
//! Laplacian is pushed towards exactly `k` connected components, while a
//! row-sparse projection `P` regresses the stacked features onto the relaxed
//! cluster indicator `F`. Features are ranked by the row norms of `P`.
//!
//! The objective minimized by alternating block updates is
//!
//! ```text
//! Ω(P, F, S, W) = Σ_j ‖S_j − Σ_v w_j^v S_j^v‖²
//!               + α Tr(Fᵀ L_S F)
//!               + β (‖XP − F‖² + γ ‖P‖₂,₁)
//! ```
//!
//! subject to every column of `S` lying on the probability simplex, every
//! column of `W` summing to one, and `FᵀF = I`.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numerics`] | dense symmetric eigensolver, SPD solves, simplex projection |
//! | [`graph`] | k-NN heat-kernel affinities, Laplacians, component counting |
//! | [`solver`] | hyperparameters, solver state, block updates, the fit loop |
//! | [`selection`] | feature ranking and top-`l` selection |
//! | [`eval`] | k-means, clustering accuracy, NMI, evaluation summaries |
//! | [`synthetic`] | multi-view data model and a seeded blob generator |
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod graph;
pub mod linalg;
pub mod numerics;
pub mod selection;
pub mod solver;
pub mod synthetic;

pub use error::{Error, Result};
pub use graph::{
    build_view_affinity, connected_components, laplacian_of, AffinityGraph, Laplacian,
};
pub use linalg::Matrix;
pub use numerics::{project_simplex, smallest_k_eigen, solve_spd, SimplexVector, SymMatrix};
pub use selection::{rank_features, select_top, FeatureRanking};
pub use solver::{fit, FitOutcome, Hyperparams, Solver, SolverState};
pub use synthetic::{generate_synthetic, MultiViewDataset, SyntheticData, ViewSpec};
