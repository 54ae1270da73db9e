use std::path::{Path, PathBuf};

use acsl_core::eval::evaluate_clustering;
use acsl_core::{
    build_view_affinity, fit, rank_features, select_top, AffinityGraph, FitOutcome, Hyperparams,
    MultiViewDataset,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::dataset::LoadedDataset;
use crate::error::{AppError, Result};
use crate::matrix_io::write_indices;
use crate::report::{
    write_json, DatasetSummary, GridBest, GridPoint, GridReport, ResultsReport, SelectionReport,
    SolverSummary, ViewSummary, SCHEMA_VERSION,
};
use crate::trace::emit_trace;

pub const RESULTS_FILE: &str = "results.json";
pub const TRACE_FILE: &str = "trace.csv";
pub const GRID_FILE: &str = "grid.json";

/// Everything one fit produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ResultsReport,
    pub outcome: FitOutcome,
}

impl ExperimentOutput {
    pub fn converged(&self) -> bool {
        self.outcome.converged
    }
}

/// One k-NN graph per view, built in parallel.
pub fn build_graphs(
    data: &MultiViewDataset,
    names: &[String],
    k_neighbors: usize,
) -> Result<Vec<AffinityGraph>> {
    data.views()
        .par_iter()
        .zip(names)
        .map(|(x, name)| {
            build_view_affinity(x, k_neighbors)
                .map(|g| g.with_view_id(name.clone()))
                .map_err(AppError::core(format!("building graph of view {name}")))
        })
        .collect()
}

fn dataset_summary(ds: &LoadedDataset) -> DatasetSummary {
    let views = ds
        .view_names
        .iter()
        .zip(ds.data.views())
        .zip(ds.data.offsets())
        .map(|((name, m), &offset)| ViewSummary {
            name: name.clone(),
            dims: m.cols(),
            offset,
        })
        .collect();
    DatasetSummary {
        name: ds.manifest.name.clone(),
        n: ds.n(),
        d: ds.d(),
        standardized: ds.manifest.standardize,
        views,
    }
}

fn fit_and_report(
    ds: &LoadedDataset,
    graphs: &[AffinityGraph],
    hp: &Hyperparams,
    cfg: &RunConfig,
    evaluate: bool,
) -> Result<ExperimentOutput> {
    let x = ds.data.stacked();
    let outcome = fit(graphs, x, hp).map_err(AppError::core("fit"))?;
    let state = &outcome.state;
    let ranking = rank_features(&state.p)
        .and_then(|r| r.with_view_of(ds.data.view_of().to_vec()))
        .map_err(AppError::core("ranking features"))?;

    let truth = match (evaluate, &ds.labels) {
        (true, Some(labels)) => Some(labels.as_slice()),
        (true, None) => {
            return Err(AppError::Config(format!(
                "dataset {} has no labels_path to evaluate against",
                ds.manifest.name
            )))
        }
        (false, _) => None,
    };
    let selections = cfg
        .resolved_l_grid(ds.d())
        .par_iter()
        .map(|&l| {
            let indices =
                select_top(&ranking, l).map_err(AppError::core(format!("selecting l = {l}")))?;
            let metrics = match truth {
                Some(truth) => {
                    let sub = x
                        .select_columns(&indices)
                        .map_err(AppError::core("slicing features"))?;
                    Some(
                        evaluate_clustering(
                            &sub,
                            truth,
                            hp.k,
                            cfg.eval.kmeans_restarts,
                            cfg.eval.seed,
                        )
                        .map_err(AppError::core(format!("evaluating l = {l}")))?,
                    )
                }
                None => None,
            };
            Ok(SelectionReport {
                l,
                indices,
                metrics,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let diag = state.diagnostics();
    let report = ResultsReport {
        schema_version: SCHEMA_VERSION,
        dataset: dataset_summary(ds),
        hyperparams: hp.clone(),
        k_neighbors: cfg.k_neighbors,
        eval: truth.map(|_| cfg.eval.clone()),
        solver: SolverSummary {
            converged: outcome.converged,
            iterations: state.iteration,
            final_objective: state.history.last().map_or(f64::NAN, |r| r.objective),
            alpha_final: state.alpha,
            components_final: diag.components,
            negative_weight_fraction: diag.negative_weight_fraction,
            diagonal_mass: diag.diagonal_mass,
        },
        objective_trace: state.objective_trace(),
        feature_scores: ranking.scores.clone(),
        selections,
    };
    Ok(ExperimentOutput { report, outcome })
}

/// Builds the view graphs, fits, ranks features and, when `evaluate` is set,
/// clusters each top-`l` selection against the dataset's labels.
pub fn run_experiment(
    ds: &LoadedDataset,
    cfg: &RunConfig,
    evaluate: bool,
) -> Result<ExperimentOutput> {
    cfg.validate(ds.n(), ds.d())?;
    let graphs = build_graphs(&ds.data, &ds.view_names, cfg.k_neighbors)?;
    fit_and_report(ds, &graphs, &cfg.hyperparams, cfg, evaluate)
}

/// Writes `results.json`, `trace.csv` and one `selected_l<l>.txt` per
/// selection size into `dir`.
pub fn write_outputs(out: &ExperimentOutput, dir: &Path) -> Result<()> {
    write_json(&dir.join(RESULTS_FILE), &out.report)?;
    emit_trace(&out.outcome.state, &dir.join(TRACE_FILE))?;
    for s in &out.report.selections {
        write_indices(&dir.join(selection_file(s.l)), &s.indices)?;
    }
    Ok(())
}

pub fn selection_file(l: usize) -> PathBuf {
    PathBuf::from(format!("selected_l{l}.txt"))
}

fn grid_dir(alpha: f64, beta: f64, gamma: f64) -> String {
    format!("alpha={alpha:e}_beta={beta:e}_gamma={gamma:e}")
}

/// Sweeps alpha, beta and gamma over `cfg.grid.values` in parallel. Each
/// point writes its outputs under `dir/grid/<point>/`; the summary goes to
/// `dir/grid.json`.
pub fn run_grid(ds: &LoadedDataset, cfg: &RunConfig, dir: &Path) -> Result<GridReport> {
    cfg.validate(ds.n(), ds.d())?;
    if ds.labels.is_none() {
        return Err(AppError::Config(
            "grid mode ranks points by ACC and needs labels_path".into(),
        ));
    }
    let graphs = build_graphs(&ds.data, &ds.view_names, cfg.k_neighbors)?;
    let values = &cfg.grid.values;
    let triples: Vec<(f64, f64, f64)> = values
        .iter()
        .flat_map(|&a| {
            values
                .iter()
                .flat_map(move |&b| values.iter().map(move |&g| (a, b, g)))
        })
        .collect();

    let points = triples
        .par_iter()
        .map(|&(alpha, beta, gamma)| {
            let hp = Hyperparams {
                alpha,
                beta,
                gamma,
                ..cfg.hyperparams.clone()
            };
            let name = grid_dir(alpha, beta, gamma);
            let out = fit_and_report(ds, &graphs, &hp, cfg, true)?;
            write_outputs(&out, &dir.join("grid").join(&name))?;
            Ok(GridPoint {
                alpha,
                beta,
                gamma,
                dir: name,
                converged: out.converged(),
                selections: out.report.selections,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<GridBest> = None;
    for p in &points {
        for s in &p.selections {
            let Some(m) = &s.metrics else { continue };
            if best.as_ref().is_none_or(|b| m.acc_mean > b.acc_mean) {
                best = Some(GridBest {
                    alpha: p.alpha,
                    beta: p.beta,
                    gamma: p.gamma,
                    l: s.l,
                    acc_mean: m.acc_mean,
                    nmi_mean: m.nmi_mean,
                });
            }
        }
    }
    let report = GridReport {
        schema_version: SCHEMA_VERSION,
        dataset: ds.manifest.name.clone(),
        values: values.clone(),
        points,
        best,
    };
    write_json(&dir.join(GRID_FILE), &report)?;
    Ok(report)
}
