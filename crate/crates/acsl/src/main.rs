use std::path::PathBuf;
use std::process::ExitCode;

use acsl::config::RunConfig;
use acsl::error::{AppError, Result};
use acsl::experiment::{run_experiment, run_grid, write_outputs, TRACE_FILE};
use acsl::synthetic_io::write_synthetic;
use acsl::trace::emit_trace;
use acsl::{load_dataset, ExperimentOutput};
use acsl_core::{generate_synthetic, ViewSpec};
use clap::{Args, Parser, Subcommand};

/// Multi-view unsupervised feature selection by adaptive collaborative
/// similarity learning.
#[derive(Debug, Parser)]
#[command(name = "acsl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded synthetic multi-view dataset with its manifest.
    Generate(GenerateArgs),
    /// Fit the solver and write feature scores and selections.
    Fit(RunArgs),
    /// Fit, select and cluster each selection against the labels.
    Evaluate(RunArgs),
    /// Evaluate every (alpha, beta, gamma) on the configured grid.
    Grid(RunArgs),
    /// Fit and write only the convergence trace.
    Trace(TraceArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Directory receiving the view CSVs, labels and manifest.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 50)]
    n_per_cluster: usize,
    #[arg(long, default_value_t = 3)]
    clusters: usize,
    /// `DIMS:NOISE:INFORMATIVE_FRACTION`, once per view.
    #[arg(long = "view", value_parser = parse_view_spec, required = true)]
    views: Vec<ViewSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "synthetic")]
    name: String,
    /// Mark the manifest as not needing standardization.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Dataset manifest (TOML).
    #[arg(long)]
    manifest: PathBuf,
    /// Run configuration (TOML). Flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of clusters.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k_neighbors: Option<usize>,
    /// Selection sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    l: Option<Vec<usize>>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    adaptive_alpha: bool,
    #[arg(long)]
    kmeans_restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Exit with status 4 if the iteration cap is reached first.
    #[arg(long)]
    fail_on_nonconvergence: bool,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Trace CSV path. Defaults to `trace.csv` in the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_view_spec(s: &str) -> std::result::Result<ViewSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [dims, noise, frac] = parts.as_slice() else {
        return Err(format!("expected DIMS:NOISE:FRACTION, got {s:?}"));
    };
    let dims = dims.parse().map_err(|e| format!("dims {dims:?}: {e}"))?;
    let noise = noise.parse().map_err(|e| format!("noise {noise:?}: {e}"))?;
    let frac = frac
        .parse()
        .map_err(|e| format!("fraction {frac:?}: {e}"))?;
    Ok(ViewSpec::new(dims, noise, frac))
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::read(path)?,
            None => RunConfig::default(),
        }
        .with_env_overrides();
        let hp = &mut cfg.hyperparams;
        if let Some(v) = self.alpha {
            hp.alpha = v;
        }
        if let Some(v) = self.beta {
            hp.beta = v;
        }
        if let Some(v) = self.gamma {
            hp.gamma = v;
        }
        if let Some(v) = self.k {
            hp.k = v;
        }
        if let Some(v) = self.max_iters {
            hp.max_outer_iters = v;
        }
        if let Some(v) = self.tol {
            hp.tol_rel_objective = v;
        }
        hp.adaptive_alpha |= self.adaptive_alpha;
        if let Some(v) = self.k_neighbors {
            cfg.k_neighbors = v;
        }
        if let Some(v) = &self.l {
            cfg.l_grid = v.clone();
        }
        if let Some(v) = self.kmeans_restarts {
            cfg.eval.kmeans_restarts = v;
        }
        if let Some(v) = self.seed {
            cfg.eval.seed = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.fail_on_nonconvergence |= self.fail_on_nonconvergence;
        Ok(cfg)
    }
}

fn check_convergence(out: &ExperimentOutput, cfg: &RunConfig) -> Result<()> {
    if out.converged() {
        return Ok(());
    }
    let iterations = out.report.solver.iterations;
    if cfg.fail_on_nonconvergence {
        return Err(AppError::NotConverged { iterations });
    }
    eprintln!(
        "warning: solver stopped after {iterations} iterations without reaching the tolerance"
    );
    Ok(())
}

fn run_single(args: &RunArgs, evaluate: bool) -> Result<()> {
    let cfg = args.config()?;
    let ds = load_dataset(&args.manifest)?;
    let out = run_experiment(&ds, &cfg, evaluate)?;
    write_outputs(&out, &cfg.output_dir)?;
    for s in &out.report.selections {
        match &s.metrics {
            Some(m) => println!(
                "l={} acc={:.4}±{:.4} nmi={:.4}±{:.4}",
                s.l, m.acc_mean, m.acc_std, m.nmi_mean, m.nmi_std
            ),
            None => println!("l={} selected {} features", s.l, s.indices.len()),
        }
    }
    println!("wrote {}", cfg.output_dir.display());
    check_convergence(&out, &cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let data = generate_synthetic(a.n_per_cluster, a.clusters, &a.views, a.seed)
                .map_err(AppError::core("generating data"))?;
            let path = write_synthetic(&data, &a.name, &a.out, !a.raw)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Fit(a) => run_single(&a, false),
        Command::Evaluate(a) => run_single(&a, true),
        Command::Grid(a) => {
            let cfg = a.config()?;
            let ds = load_dataset(&a.manifest)?;
            let report = run_grid(&ds, &cfg, &cfg.output_dir)?;
            if let Some(b) = &report.best {
                println!(
                    "best alpha={:e} beta={:e} gamma={:e} l={} acc={:.4} nmi={:.4}",
                    b.alpha, b.beta, b.gamma, b.l, b.acc_mean, b.nmi_mean
                );
            }
            let stalled = report.points.iter().filter(|p| !p.converged).count();
            if stalled > 0 && cfg.fail_on_nonconvergence {
                return Err(AppError::NotConverged {
                    iterations: cfg.hyperparams.max_outer_iters,
                });
            }
            Ok(())
        }
        Command::Trace(a) => {
            let cfg = a.run.config()?;
            let ds = load_dataset(&a.run.manifest)?;
            let out = run_experiment(&ds, &cfg, false)?;
            let path = a
                .out
                .clone()
                .unwrap_or_else(|| cfg.output_dir.join(TRACE_FILE));
            emit_trace(&out.outcome.state, &path)?;
            println!("wrote {}", path.display());
            check_convergence(&out, &cfg)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
