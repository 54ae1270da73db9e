#![allow(dead_code, clippy::needless_range_loop)]

use acsl_core::solver::{Hyperparams, SolverState};
use acsl_core::{AffinityGraph, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let a = gaussian(rng, n, n);
    Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let a = gaussian(rng, n, n);
    let mut g = a.gram();
    for i in 0..n {
        g[(i, i)] += 0.1;
    }
    g
}

/// Modified Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_orthonormal(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Matrix {
    let mut q = gaussian(rng, n, k);
    for c in 0..k {
        for prev in 0..c {
            let d: f64 = (0..n).map(|i| q[(i, c)] * q[(i, prev)]).sum();
            for i in 0..n {
                q[(i, c)] -= d * q[(i, prev)];
            }
        }
        let norm = (0..n).map(|i| q[(i, c)] * q[(i, c)]).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, c)] /= norm;
        }
    }
    q
}

pub fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

/// Column-stochastic graph with zero diagonal and a few zero entries.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> AffinityGraph {
    let mut data = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut col: Vec<f64> = (0..n)
            .map(|i| {
                if i == j || rng.random::<f64>() < 0.3 {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        if col.iter().all(|&v| v == 0.0) {
            col[(j + 1) % n] = 1.0;
        }
        let total: f64 = col.iter().sum();
        col.iter_mut().for_each(|v| *v /= total);
        data.extend(col);
    }
    AffinityGraph::from_columns(n, data, None).unwrap()
}

/// Block-diagonal graph over the given block sizes; every column is uniform
/// over the other members of its block.
pub fn block_graph(sizes: &[usize]) -> AffinityGraph {
    let n: usize = sizes.iter().sum();
    let mut block_of = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, s));
    }
    let mut data = vec![0.0; n * n];
    for j in 0..n {
        let peers: Vec<usize> = (0..n)
            .filter(|&i| i != j && block_of[i] == block_of[j])
            .collect();
        let targets = if peers.is_empty() { vec![j] } else { peers };
        for &i in &targets {
            data[j * n + i] = 1.0 / targets.len() as f64;
        }
    }
    AffinityGraph::from_columns(n, data, None).unwrap()
}

/// A state with random but feasible blocks.
pub fn random_state(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    k: usize,
    views: usize,
    alpha: f64,
) -> SolverState {
    let s_data: Vec<f64> = (0..n).flat_map(|_| random_simplex_point(rng, n)).collect();
    let mut w = gaussian(rng, views, n);
    for j in 0..n {
        let total: f64 = (0..views).map(|v| w[(v, j)]).sum();
        let shift = (total - 1.0) / views as f64;
        for v in 0..views {
            w[(v, j)] -= shift;
        }
    }
    SolverState {
        p: gaussian(rng, d, k),
        f: random_orthonormal(rng, n, k),
        s: AffinityGraph::from_columns(n, s_data, None).unwrap(),
        w,
        gamma_diag: (0..d).map(|_| 0.1 + rng.random::<f64>()).collect(),
        alpha,
        iteration: 0,
        history: Vec::new(),
    }
}

/// Cyclic Jacobi eigenvalue iteration; returns the ascending spectrum.
pub fn jacobi_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (mrp, mrq) = (m[r][p], m[r][q]);
                    m[r][p] = c * mrp - s * mrq;
                    m[r][q] = s * mrp + c * mrq;
                }
                for r in 0..n {
                    let (mpr, mqr) = (m[p][r], m[q][r]);
                    m[p][r] = c * mpr - s * mqr;
                    m[q][r] = s * mpr + c * mqr;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Exact minimizer of a separable convex `Σ_i φ(i, x_i)` over the grid
/// `{x ≥ 0, Σx = 1}` with `steps` cells per unit. Handing out the units one at
/// a time to the coordinate with the cheapest marginal cost is optimal for
/// separable convex allocation, so this scans the grid without enumerating it.
pub fn simplex_grid_min(n: usize, steps: usize, phi: impl Fn(usize, f64) -> f64) -> Vec<f64> {
    let h = 1.0 / steps as f64;
    let mut counts = vec![0usize; n];
    for _ in 0..steps {
        let best = (0..n)
            .min_by(|&a, &b| {
                let ma = phi(a, (counts[a] + 1) as f64 * h) - phi(a, counts[a] as f64 * h);
                let mb = phi(b, (counts[b] + 1) as f64 * h) - phi(b, counts[b] as f64 * h);
                ma.total_cmp(&mb)
            })
            .unwrap();
        counts[best] += 1;
    }
    counts.iter().map(|&c| c as f64 * h).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, piv);
        b.swap(c, piv);
        for r in (c + 1)..n {
            let f = a[r][c] / a[c][c];
            for t in c..n {
                a[r][t] -= f * a[c][t];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|t| a[r][t] * x[t]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `‖XP − F‖² + γ Tr(Pᵀ Γ P)` for a fixed Γ.
pub fn reweighted_objective(x: &Matrix, p: &Matrix, f: &Matrix, g: &[f64], gamma: f64) -> f64 {
    let r = x.matmul(p).unwrap().sub(f).unwrap().frobenius_norm_sq();
    let pen: f64 = (0..p.rows())
        .map(|i| g[i] * p.row(i).iter().map(|v| v * v).sum::<f64>())
        .sum();
    r + gamma * pen
}

pub fn fd_gradient(p: &Matrix, h: f64, obj: impl Fn(&Matrix) -> f64) -> Matrix {
    Matrix::from_fn(p.rows(), p.cols(), |i, c| {
        let mut plus = p.clone();
        plus[(i, c)] += h;
        let mut minus = p.clone();
        minus[(i, c)] -= h;
        (obj(&plus) - obj(&minus)) / (2.0 * h)
    })
}

pub fn analytic_gradient(x: &Matrix, p: &Matrix, f: &Matrix, g: &[f64], gamma: f64) -> Matrix {
    let r = x.matmul(p).unwrap().sub(f).unwrap();
    let xr = x.t_matmul(&r).unwrap();
    Matrix::from_fn(p.rows(), p.cols(), |i, c| {
        2.0 * xr[(i, c)] + 2.0 * gamma * g[i] * p[(i, c)]
    })
}

/// Equality-constrained least squares for column `j` of `W`, solved through
/// its full KKT system.
pub fn kkt_weights(state: &SolverState, views: &[AffinityGraph], j: usize) -> Vec<f64> {
    let (n, nv) = (state.s.n(), views.len());
    let b: Vec<Vec<f64>> = (0..nv)
        .map(|v| {
            (0..n)
                .map(|i| state.s.get(i, j) - views[v].get(i, j))
                .collect()
        })
        .collect();
    let mut kkt = vec![vec![0.0; nv + 1]; nv + 1];
    for a in 0..nv {
        for c in 0..nv {
            kkt[a][c] = 2.0 * b[a].iter().zip(&b[c]).map(|(x, y)| x * y).sum::<f64>();
        }
        kkt[a][nv] = 1.0;
        kkt[nv][a] = 1.0;
    }
    let mut rhs = vec![0.0; nv + 1];
    rhs[nv] = 1.0;
    let mut sol = gauss_solve(kkt, rhs);
    sol.truncate(nv);
    sol
}

/// The full objective by explicit loops. Returns `(total, fusion, rank)`.
pub fn naive_objective(
    state: &SolverState,
    views: &[AffinityGraph],
    x: &Matrix,
    h: &Hyperparams,
) -> (f64, f64, f64) {
    let (n, d, k, nv) = (state.s.n(), x.cols(), state.f.cols(), views.len());
    let mut fusion = 0.0;
    let mut rank = 0.0;
    for j in 0..n {
        for i in 0..n {
            let mut r = state.s.get(i, j);
            for v in 0..nv {
                r -= state.w[(v, j)] * views[v].get(i, j);
            }
            fusion += r * r;
            let sym = 0.5 * (state.s.get(i, j) + state.s.get(j, i));
            rank += 0.5 * sym * dist(state.f.row(i), state.f.row(j)).powi(2);
        }
    }
    let mut regression = 0.0;
    for i in 0..n {
        for c in 0..k {
            let mut r = -state.f[(i, c)];
            for t in 0..d {
                r += x[(i, t)] * state.p[(t, c)];
            }
            regression += r * r;
        }
    }
    let sparsity: f64 = (0..d)
        .map(|t| (0..k).map(|c| state.p[(t, c)].powi(2)).sum::<f64>().sqrt())
        .sum();
    (
        fusion + state.alpha * rank + h.beta * (regression + h.gamma * sparsity),
        fusion,
        rank,
    )
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Most agreements between `pred` and `truth` over every relabeling of `pred`.
pub fn best_matching_by_enumeration(pred: &[usize], truth: &[usize], k: usize) -> usize {
    permutations(k)
        .iter()
        .map(|perm| {
            pred.iter()
                .zip(truth)
                .filter(|&(&p, &t)| perm[p] == t)
                .count()
        })
        .max()
        .unwrap()
}
