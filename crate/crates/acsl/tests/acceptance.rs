//! Acceptance checks, one `[PASS]`/`[FAIL]` line per criterion. Exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use acsl_core::eval::{clustering_accuracy, evaluate_clustering};
use acsl_core::graph::COMPONENT_THRESHOLD;
use acsl_core::numerics::symmetric_eigen;
use acsl_core::solver::{
    f_operator, objective_terms, update_f, update_p, update_w, Hyperparams, SolverState,
};
use acsl_core::{
    build_view_affinity, connected_components, generate_synthetic, laplacian_of, project_simplex,
    rank_features, select_top, AffinityGraph, Matrix, MultiViewDataset, Solver, ViewSpec,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIMPLEX_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-8;
const WEIGHT_TOL: f64 = 1e-9;

/// Worst constraint residuals seen across every outer iteration of every run.
#[derive(Default)]
struct Invariants {
    simplex: f64,
    orthonormality: f64,
    weight_sum: f64,
    iterations: usize,
}

impl Invariants {
    fn record(&mut self, state: &SolverState) {
        let r = state.constraint_residuals();
        self.simplex = self.simplex.max(r.simplex);
        self.orthonormality = self.orthonormality.max(r.orthonormality);
        self.weight_sum = self.weight_sum.max(r.weight_sum);
        self.iterations += 1;
    }

    fn ok(&self) -> bool {
        self.simplex <= SIMPLEX_TOL
            && self.orthonormality <= ORTHO_TOL
            && self.weight_sum <= WEIGHT_TOL
    }
}

struct Run {
    state: SolverState,
    /// Relative objective change of every outer step.
    changes: Vec<f64>,
}

/// Same stopping rule as `Solver::run`, with the constraints checked after
/// every outer step.
fn drive(graphs: &[AffinityGraph], x: &Matrix, hp: &Hyperparams, inv: &mut Invariants) -> Run {
    let mut solver = Solver::new(graphs, x, hp.clone()).unwrap();
    let mut last_alpha_changed = false;
    let mut changes = Vec::new();
    for _ in 0..hp.max_outer_iters {
        let report = solver.step().unwrap();
        inv.record(solver.state());
        changes.push(report.relative_change);
        if !report.alpha_changed
            && !last_alpha_changed
            && report.relative_change < hp.tol_rel_objective
        {
            break;
        }
        last_alpha_changed = report.alpha_changed;
    }
    Run {
        state: solver.into_state(),
        changes,
    }
}

struct Prepared {
    data: MultiViewDataset,
    graphs: Vec<AffinityGraph>,
    labels: Vec<usize>,
    informative: Vec<usize>,
}

fn prepare(n_per: usize, k: usize, specs: &[ViewSpec], seed: u64, k_neighbors: usize) -> Prepared {
    let syn = generate_synthetic(n_per, k, specs, seed).unwrap();
    let data = syn.dataset.standardized();
    let graphs = data
        .views()
        .iter()
        .map(|v| build_view_affinity(v, k_neighbors).unwrap())
        .collect();
    Prepared {
        data,
        graphs,
        labels: syn.labels,
        informative: syn.informative,
    }
}

struct Verdict {
    id: u32,
    pass: bool,
    line: String,
}

fn report(id: u32, name: &str, pass: bool, detail: String) -> Verdict {
    Verdict {
        id,
        pass,
        line: format!(
            "[{}] criterion {id}: {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        ),
    }
}

fn monotone_descent(inv: &mut Invariants) -> Verdict {
    let start = Instant::now();
    let mut rng = rng(1001);
    let mut worst_rise = f64::NEG_INFINITY;
    let mut failures = 0;
    let mut largest_n = 0;
    for t in 0..20u64 {
        let k = rng.random_range(2..=4);
        let n_per = rng.random_range(10..=200 / k);
        let v = rng.random_range(1..=4);
        let specs: Vec<ViewSpec> = (0..v)
            .map(|_| {
                ViewSpec::new(
                    rng.random_range(5..=30),
                    rng.random_range(0.1..1.5),
                    rng.random_range(0.1..0.6),
                )
            })
            .collect();
        let p = prepare(n_per, k, &specs, 5000 + t, 8);
        largest_n = largest_n.max(p.data.n());
        let hp = Hyperparams {
            alpha: rng.random_range(0.5..20.0),
            beta: rng.random_range(0.1..3.0),
            gamma: rng.random_range(0.1..3.0),
            k,
            max_outer_iters: 25,
            ..Hyperparams::default()
        };
        let run = drive(&p.graphs, p.data.stacked(), &hp, inv);
        let trace = run.state.objective_trace();
        for w in trace.windows(2) {
            let rise = (w[1] - w[0]) / w[0].abs().max(1.0);
            worst_rise = worst_rise.max(rise);
            if rise > 1e-9 {
                failures += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "monotone descent",
        failures == 0 && secs < 30.0,
        format!("20 instances (N <= {largest_n}), {failures} rises above 1e-9, worst relative step {worst_rise:.2e}, {secs:.1} s"),
    )
}

fn convergence_speed(inv: &mut Invariants) -> Verdict {
    let mut worst = 0;
    let mut all = true;
    for seed in 0..5 {
        let p = prepare(
            50,
            3,
            &[ViewSpec::new(30, 0.1, 0.3), ViewSpec::new(20, 0.1, 0.3)],
            100 + seed,
            10,
        );
        let hp = Hyperparams {
            alpha: 10.0,
            k: 3,
            max_outer_iters: 20,
            tol_rel_objective: 1e-6,
            ..Hyperparams::default()
        };
        let run = drive(&p.graphs, p.data.stacked(), &hp, inv);
        let first = run.changes.iter().position(|&c| c < 1e-6).map(|i| i + 1);
        match first {
            Some(it) => worst = worst.max(it),
            None => all = false,
        }
    }
    report(
        2,
        "convergence speed",
        all && worst <= 20,
        if all {
            format!("5 well-separated sets, relative change < 1e-6 by iteration {worst} at worst")
        } else {
            "some run needed more than 20 iterations".into()
        },
    )
}

fn rank_constraint(inv: &mut Invariants) -> Verdict {
    let mut hits = 0;
    for seed in 0..20 {
        let p = prepare(
            50,
            3,
            &[ViewSpec::new(30, 0.1, 0.2), ViewSpec::new(20, 0.1, 0.2)],
            200 + seed,
            10,
        );
        let hp = Hyperparams {
            alpha: 1.0,
            k: 3,
            adaptive_alpha: true,
            ..Hyperparams::default()
        };
        let run = drive(&p.graphs, p.data.stacked(), &hp, inv);
        let components = connected_components(&run.state.s, COMPONENT_THRESHOLD);
        let zeros = symmetric_eigen(&laplacian_of(&run.state.s).matrix)
            .values
            .iter()
            .filter(|&&v| v < 1e-7)
            .count();
        if components == 3 && zeros == 3 {
            hits += 1;
        }
    }
    report(
        3,
        "rank-constraint realization",
        hits >= 18,
        format!("{hits}/20 seeds end with 3 components and 3 zero eigenvalues (N = 150)"),
    )
}

fn oracle_equivalence() -> Verdict {
    let mut rng = rng(3003);
    let mut simplex_ok = 0;
    for _ in 0..100 {
        let v: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.5)).collect();
        let got = project_simplex(&v).unwrap();
        let grid = simplex_grid_min(5, 1000, |i, t| (t - v[i]) * (t - v[i]));
        let obj = |s: &[f64]| {
            s.iter()
                .zip(&v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        };
        let close = got
            .as_slice()
            .iter()
            .zip(&grid)
            .all(|(a, b)| (a - b).abs() <= 5e-3);
        if close && obj(got.as_slice()) <= obj(&grid) + 1e-12 {
            simplex_ok += 1;
        }
    }

    let mut w_ok = 0;
    for _ in 0..100 {
        let n = 8;
        let state = random_state(&mut rng, n, 3, 2, 3, 1.0);
        let views: Vec<AffinityGraph> = (0..3).map(|_| random_graph(&mut rng, n)).collect();
        let w = update_w(&state, &views).unwrap();
        if (0..n).all(|j| {
            kkt_weights(&state, &views, j)
                .iter()
                .enumerate()
                .all(|(v, s)| (w[(v, j)] - s).abs() < 1e-8)
        }) {
            w_ok += 1;
        }
    }

    let mut f_ok = 0;
    for t in 0..100 {
        let (n, d, k) = (6 + t % 7, 4, 2 + t % 2);
        let x = gaussian(&mut rng, n, d);
        let alpha = rng.random_range(0.1..5.0);
        let state = random_state(&mut rng, n, d, k, 2, alpha);
        let hp = Hyperparams {
            beta: rng.random_range(0.1..3.0),
            gamma: rng.random_range(0.1..3.0),
            ..Hyperparams::with_clusters(k)
        };
        let m = f_operator(&state, &x, &hp).unwrap();
        let got = m
            .quadratic_trace(&update_f(&state, &x, &hp).unwrap().f)
            .unwrap();
        let oracle: f64 = jacobi_eigenvalues(m.as_matrix())[..k].iter().sum();
        if (got - oracle).abs() < 1e-8 {
            f_ok += 1;
        }
    }

    let mut obj_ok = 0;
    for _ in 0..100 {
        let (n, d, k) = (7, 5, 2);
        let alpha = rng.random_range(0.1..3.0);
        let state = random_state(&mut rng, n, d, k, 3, alpha);
        let views: Vec<AffinityGraph> = (0..3).map(|_| random_graph(&mut rng, n)).collect();
        let x = gaussian(&mut rng, n, d);
        let hp = Hyperparams {
            beta: rng.random_range(0.1..3.0),
            gamma: rng.random_range(0.1..3.0),
            ..Hyperparams::with_clusters(k)
        };
        let (naive, _, _) = naive_objective(&state, &views, &x, &hp);
        let got = objective_terms(&state, &views, &x, &hp).unwrap().total;
        if (got - naive).abs() < 1e-10 * (1.0 + naive.abs()) {
            obj_ok += 1;
        }
    }

    let mut acc_ok = 0;
    for t in 0..100 {
        let k = 2 + t % 3;
        let pred: Vec<usize> = (0..20).map(|_| rng.random_range(0..k)).collect();
        let truth: Vec<usize> = (0..20).map(|_| rng.random_range(0..k)).collect();
        let best = best_matching_by_enumeration(&pred, &truth, k) as f64 / 20.0;
        if (clustering_accuracy(&pred, &truth).unwrap() - best).abs() < 1e-15 {
            acc_ok += 1;
        }
    }

    let all = [simplex_ok, w_ok, f_ok, obj_ok, acc_ok];
    report(
        4,
        "oracle equivalence",
        all.iter().all(|&c| c == 100),
        format!("simplex {simplex_ok}/100, W-KKT {w_ok}/100, F-trace {f_ok}/100, objective {obj_ok}/100, ACC {acc_ok}/100"),
    )
}

fn gradient_checks() -> Verdict {
    let mut rng = rng(4004);
    let mut worst_grad: f64 = 0.0;
    let mut worst_stationary: f64 = 0.0;
    let mut worst_rise = f64::NEG_INFINITY;
    for _ in 0..20 {
        let (n, d, k) = (15, 8, 3);
        let x = gaussian(&mut rng, n, d);
        let mut state = random_state(&mut rng, n, d, k, 2, 1.0);
        state.gamma_diag = (0..d).map(|_| 0.1 + rng.random::<f64>()).collect();
        let hp = Hyperparams {
            gamma: rng.random_range(0.2..2.0),
            ..Hyperparams::with_clusters(k)
        };

        let pu = update_p(&state, &x, &hp).unwrap();
        let obj = |p: &Matrix| reweighted_objective(&x, p, &state.f, &pu.solve_gamma, hp.gamma);

        // analytic gradient against central differences at a random point
        let p0 = gaussian(&mut rng, d, k);
        let an = analytic_gradient(&x, &p0, &state.f, &pu.solve_gamma, hp.gamma);
        let fd = fd_gradient(&p0, 1e-5, obj);
        worst_grad = worst_grad.max(fd.sub(&an).unwrap().frobenius_norm() / an.frobenius_norm());

        // the returned P is stationary under the Γ that produced it
        let fd = fd_gradient(&pu.p, 1e-5, obj);
        let scale = analytic_gradient(
            &x,
            &Matrix::zeros(d, k),
            &state.f,
            &pu.solve_gamma,
            hp.gamma,
        )
        .frobenius_norm();
        worst_stationary = worst_stationary.max(fd.frobenius_norm() / scale);

        for w in pu.inner_objectives.windows(2) {
            worst_rise = worst_rise.max((w[1] - w[0]) / w[0].abs().max(1.0));
        }
    }
    report(
        5,
        "gradient checks",
        worst_grad < 1e-4 && worst_stationary < 1e-4 && worst_rise <= 0.0,
        format!(
            "20 instances, gradient rel err {worst_grad:.1e}, stationarity {worst_stationary:.1e}, worst inner step {worst_rise:.1e}"
        ),
    )
}

fn constraint_invariants(inv: &Invariants) -> Verdict {
    report(
        6,
        "constraint invariants",
        inv.ok(),
        format!(
            "{} outer iterations, simplex {:.1e}, FtF-I {:.1e}, W sums {:.1e}",
            inv.iterations, inv.simplex, inv.orthonormality, inv.weight_sum
        ),
    )
}

fn precision(selected: &[usize], informative: &[usize]) -> f64 {
    selected.iter().filter(|i| informative.contains(i)).count() as f64 / selected.len() as f64
}

fn selection_quality(inv: &mut Invariants) -> Verdict {
    let (mut p_acsl, mut p_rand, mut a_acsl, mut a_rand) = (0.0, 0.0, 0.0, 0.0);
    let seeds = 20;
    let mut l = 0;
    for seed in 0..seeds {
        let p = prepare(
            50,
            3,
            &[ViewSpec::new(50, 0.5, 0.2), ViewSpec::new(40, 0.5, 0.2)],
            700 + seed,
            10,
        );
        let hp = Hyperparams {
            alpha: 10.0,
            k: 3,
            ..Hyperparams::default()
        };
        let run = drive(&p.graphs, p.data.stacked(), &hp, inv);
        l = p.informative.len();
        let ranking = rank_features(&run.state.p).unwrap();
        let chosen = select_top(&ranking, l).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed + 1000);
        let random = rand::seq::index::sample(&mut r, p.data.d(), l).into_vec();

        let x = p.data.stacked();
        let acc = |cols: &[usize]| {
            evaluate_clustering(&x.select_columns(cols).unwrap(), &p.labels, 3, 10, seed)
                .unwrap()
                .acc_mean
        };
        p_acsl += precision(&chosen, &p.informative);
        p_rand += precision(&random, &p.informative);
        a_acsl += acc(&chosen);
        a_rand += acc(&random);
    }
    let s = seeds as f64;
    let (p_acsl, p_rand, a_acsl, a_rand) = (p_acsl / s, p_rand / s, a_acsl / s, a_rand / s);
    report(
        7,
        "selection quality",
        p_acsl >= 3.0 * p_rand && a_acsl - a_rand >= 0.1,
        format!("l = {l}, precision {p_acsl:.3} vs random {p_rand:.3} ({:.2}x), ACC {a_acsl:.3} vs {a_rand:.3}", p_acsl / p_rand),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_acsl");
    let run = |args: &[&str]| {
        let out = Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .env_remove("ACSL_OUTPUT_DIR")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    run(&[
        "generate",
        "--out",
        "data",
        "--n-per-cluster",
        "30",
        "--view",
        "20:0.5:0.2",
        "--view",
        "15:0.5:0.2",
        "--seed",
        "9",
    ]);
    for out in ["a", "b"] {
        run(&[
            "evaluate",
            "--manifest",
            "data/manifest.toml",
            "--k",
            "3",
            "--alpha",
            "10",
            "--l",
            "3,7",
            "--kmeans-restarts",
            "10",
            "--output-dir",
            out,
        ]);
    }
    let read = |d: &str, f: &str| fs::read(Path::new(dir.path()).join(d).join(f)).unwrap();
    let same = ["results.json", "trace.csv"]
        .iter()
        .all(|f| read("a", f) == read("b", f));
    report(
        8,
        "determinism",
        same,
        "two CLI runs produce byte-identical results.json and trace.csv".into(),
    )
}

fn main() {
    let start = Instant::now();
    let mut inv = Invariants::default();
    let mut verdicts = vec![
        monotone_descent(&mut inv),
        convergence_speed(&mut inv),
        rank_constraint(&mut inv),
        oracle_equivalence(),
        gradient_checks(),
        selection_quality(&mut inv),
        determinism(),
    ];
    verdicts.push(constraint_invariants(&inv));
    verdicts.sort_by_key(|v| v.id);
    for v in &verdicts {
        println!("{}", v.line);
    }
    let passed = verdicts.iter().filter(|v| v.pass).count();
    println!(
        "{passed}/{} criteria passed in {:.1} s",
        verdicts.len(),
        start.elapsed().as_secs_f64()
    );
    if passed != verdicts.len() {
        std::process::exit(1);
    }
}
