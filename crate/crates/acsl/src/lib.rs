//! File formats, experiment orchestration and the `acsl` command line on top
//! of [`acsl_core`].
//!
//! A run reads a [`manifest`] naming the view matrices, builds one k-NN
//! graph per view, fits the solver and writes:
//!
//! * `results.json`: solver summary, feature scores and one selection per
//!   requested size, with clustering metrics when labels are available;
//! * `trace.csv`: `iteration,objective,components,alpha`, one row per
//!   iteration including the initial state;
//! * `selected_l<l>.txt`: the selected stacked column indices, best first.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod manifest;
pub mod matrix_io;
pub mod report;
pub mod synthetic_io;
pub mod trace;

pub use config::RunConfig;
pub use dataset::{load_dataset, LoadedDataset};
pub use error::{AppError, Result};
pub use experiment::{run_experiment, run_grid, write_outputs, ExperimentOutput};
