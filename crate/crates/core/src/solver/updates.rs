use alloc::vec;
use alloc::vec::Vec;

use super::{Hyperparams, IterationRecord, SolverState};
use crate::error::{config_err, dim_err, Result};
use crate::graph::{connected_components, laplacian_of, AffinityGraph, COMPONENT_THRESHOLD};
use crate::linalg::{dot, sq_dist, Matrix};
use crate::numerics::{
    simplex::project_unchecked, smallest_k_eigen, symmetric_eigen, Cholesky, SymMatrix,
};

/// The four terms of the objective, before weighting by `alpha`/`beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    /// `Σ_j ‖S_j − Σ_v w_j^v S_j^v‖²`
    pub fusion: f64,
    /// `Tr(Fᵀ L_S F)`
    pub rank: f64,
    /// `‖XP − F‖²`
    pub regression: f64,
    /// `‖P‖₂,₁`
    pub sparsity: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct PUpdate {
    pub p: Matrix,
    /// Γ recomputed from the returned `p`.
    pub gamma_diag: Vec<f64>,
    /// Γ of the solve that produced `p`, under which `p` minimizes
    /// `‖XP − F‖² + γ Tr(PᵀΓP)` exactly. Equals `gamma_diag` when no inner
    /// step was accepted.
    pub solve_gamma: Vec<f64>,
    /// `‖XP − F‖² + γ‖P‖₂,₁` at the start and after every accepted inner step.
    pub inner_objectives: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FUpdate {
    pub f: Matrix,
    /// `Q⁻¹ Xᵀ F` for the new `F`, i.e. the projection optimal for it under
    /// the current Γ.
    pub p: Matrix,
    pub eigenvalues: Vec<f64>,
}

fn check_views(views: &[AffinityGraph], n: usize) -> Result<()> {
    if views.is_empty() {
        return Err(config_err!("at least one view is required"));
    }
    for (v, g) in views.iter().enumerate() {
        if g.n() != n {
            return Err(dim_err!(
                "view {} graph has {} nodes, expected {}",
                v,
                g.n(),
                n
            ));
        }
    }
    Ok(())
}

/// `Γ_ii = 1 / (2 √(‖P_i‖² + ε))`.
pub fn reweighting(p: &Matrix, epsilon: f64) -> Vec<f64> {
    (0..p.rows())
        .map(|i| {
            let sq: f64 = p.row(i).iter().map(|v| v * v).sum();
            1.0 / (2.0 * libm::sqrt(sq + epsilon))
        })
        .collect()
}

fn q_matrix(xtx: &Matrix, gamma_diag: &[f64], gamma: f64) -> Result<SymMatrix> {
    let mut q = xtx.clone();
    for (i, &g) in gamma_diag.iter().enumerate() {
        q[(i, i)] += gamma * g;
    }
    SymMatrix::new(q)
}

/// `P = (XᵀX + γΓ)⁻¹ XᵀF` for a fixed Γ.
pub fn solve_projection(x: &Matrix, f: &Matrix, gamma_diag: &[f64], gamma: f64) -> Result<Matrix> {
    if gamma_diag.len() != x.cols() || f.rows() != x.rows() {
        return Err(dim_err!(
            "X is {:?}, F is {:?}, Γ has {} entries",
            x.shape(),
            f.shape(),
            gamma_diag.len()
        ));
    }
    let q = q_matrix(&x.gram(), gamma_diag, gamma)?;
    Cholesky::new(&q)?.solve(&x.t_matmul(f)?)
}

/// `‖XP − F‖² + γ‖P‖₂,₁`.
pub fn sparse_regression_objective(x: &Matrix, p: &Matrix, f: &Matrix, gamma: f64) -> Result<f64> {
    let residual = x.matmul(p)?.sub(f)?;
    let l21: f64 = p.row_norms().iter().sum();
    Ok(residual.frobenius_norm_sq() + gamma * l21)
}

/// Builds the initial state: uniform view weights, the averaged graph as `S`,
/// `F` from the eigenproblem with `Γ = I`, and `P = (XᵀX + γI)⁻¹XᵀF`.
pub fn initialize(views: &[AffinityGraph], x: &Matrix, hp: &Hyperparams) -> Result<SolverState> {
    hp.validate()?;
    let n = x.rows();
    check_views(views, n)?;
    if !x.is_finite() {
        return Err(crate::Error::NonFinite("feature matrix"));
    }
    if n < hp.k {
        return Err(config_err!(
            "N = {} samples cannot form k = {} clusters",
            n,
            hp.k
        ));
    }
    if x.cols() == 0 {
        return Err(dim_err!("feature matrix has no columns"));
    }
    let nv = views.len();

    let w = Matrix::from_fn(nv, n, |_, _| 1.0 / nv as f64);
    let mut data = Vec::with_capacity(n * n);
    let mut target = vec![0.0; n];
    for j in 0..n {
        target.iter_mut().for_each(|t| *t = 0.0);
        for g in views {
            for (t, &s) in target.iter_mut().zip(g.column(j)) {
                *t += s / nv as f64;
            }
        }
        data.extend(project_unchecked(&target));
    }
    let s = AffinityGraph::from_columns_unchecked(n, data, None);

    let gamma_diag = vec![1.0; x.cols()];
    let mut state = SolverState {
        p: Matrix::zeros(x.cols(), hp.k),
        f: Matrix::zeros(n, hp.k),
        s,
        w,
        gamma_diag,
        alpha: hp.alpha,
        iteration: 0,
        history: Vec::new(),
    };
    let fu = update_f(&state, x, hp)?;
    state.f = fu.f;
    state.p = fu.p;
    let objective = objective(&state, views, x, hp)?;
    state.history.push(IterationRecord {
        iteration: 0,
        objective,
        components: connected_components(&state.s, COMPONENT_THRESHOLD),
        alpha: state.alpha,
    });
    Ok(state)
}

/// Reweighted least squares for `min_P ‖XP − F‖² + γ‖P‖₂,₁`.
///
/// Starts from the current `P`, alternating `Γ ← Γ(P)` and
/// `P ← (XᵀX + γΓ)⁻¹XᵀF` until the relative decrease drops below
/// `tol_inner` or `max_inner_iters` is reached. A step that would increase
/// the objective is not taken.
pub fn update_p(state: &SolverState, x: &Matrix, hp: &Hyperparams) -> Result<PUpdate> {
    let xtx = x.gram();
    let xtf = x.t_matmul(&state.f)?;
    let mut p = state.p.clone();
    let mut current = sparse_regression_objective(x, &p, &state.f, hp.gamma)?;
    let mut inner_objectives = vec![current];
    let mut solve_gamma = None;

    for _ in 0..hp.max_inner_iters {
        let gamma_diag = reweighting(&p, hp.epsilon);
        let q = q_matrix(&xtx, &gamma_diag, hp.gamma)?;
        let candidate = Cholesky::new(&q)?.solve(&xtf)?;
        let value = sparse_regression_objective(x, &candidate, &state.f, hp.gamma)?;
        if value > current {
            break;
        }
        let rel = (current - value) / current.abs().max(f64::MIN_POSITIVE);
        p = candidate;
        current = value;
        inner_objectives.push(value);
        solve_gamma = Some(gamma_diag);
        if rel < hp.tol_inner {
            break;
        }
    }
    let gamma_diag = reweighting(&p, hp.epsilon);
    let solve_gamma = solve_gamma.unwrap_or_else(|| gamma_diag.clone());
    Ok(PUpdate {
        p,
        gamma_diag,
        solve_gamma,
        inner_objectives,
    })
}

fn f_operator_parts(
    state: &SolverState,
    x: &Matrix,
    hp: &Hyperparams,
) -> Result<(SymMatrix, Matrix)> {
    let n = x.rows();
    if state.f.rows() != n || state.s.n() != n {
        return Err(dim_err!(
            "state is sized for {} samples, X has {}",
            state.s.n(),
            n
        ));
    }
    let q = q_matrix(&x.gram(), &state.gamma_diag, hp.gamma)?;
    // Y = Q⁻¹ Xᵀ, d × N
    let y = Cholesky::new(&q)?.solve(&x.transpose())?;
    let hat = x.matmul(&y)?;
    let lap = laplacian_of(&state.s);
    let mut m = lap.matrix.into_matrix();
    m.scale(state.alpha);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= hp.beta * hat[(i, j)];
        }
        m[(i, i)] += hp.beta;
    }
    Ok((SymMatrix::new(m)?, y))
}

/// `M = α L_S + β I − β X Q⁻¹ Xᵀ`, `Q = XᵀX + γΓ`, symmetrized.
pub fn f_operator(state: &SolverState, x: &Matrix, hp: &Hyperparams) -> Result<SymMatrix> {
    f_operator_parts(state, x, hp).map(|(m, _)| m)
}

/// `F` = the `k` smallest eigenvectors of [`f_operator`], together with the
/// projection `Q⁻¹XᵀF` that is optimal for it.
pub fn update_f(state: &SolverState, x: &Matrix, hp: &Hyperparams) -> Result<FUpdate> {
    let (m, y) = f_operator_parts(state, x, hp)?;
    let eig = smallest_k_eigen(&m, hp.k)?;
    let p = y.matmul(&eig.vectors)?;
    Ok(FUpdate {
        f: eig.vectors,
        p,
        eigenvalues: eig.values,
    })
}

/// Column-wise simplex projection of `Σ_v w_j^v S_j^v − (α/4) A_j`, where
/// `A_ij = ‖f_i − f_j‖²`.
///
/// Because `Tr(Fᵀ L_S F) = ½ Σ_ij S_ij ‖f_i − f_j‖²`, this is the exact
/// minimizer of the objective over each column of `S`.
pub fn update_s(state: &SolverState, views: &[AffinityGraph]) -> Result<AffinityGraph> {
    let n = state.s.n();
    check_views(views, n)?;
    if state.w.shape() != (views.len(), n) {
        return Err(dim_err!(
            "W is {:?}, expected {}x{}",
            state.w.shape(),
            views.len(),
            n
        ));
    }
    let scale = 0.25 * state.alpha;
    let mut data = Vec::with_capacity(n * n);
    let mut target = vec![0.0; n];
    for j in 0..n {
        target.iter_mut().for_each(|t| *t = 0.0);
        for (v, g) in views.iter().enumerate() {
            let wv = state.w[(v, j)];
            for (t, &s) in target.iter_mut().zip(g.column(j)) {
                *t += wv * s;
            }
        }
        let fj = state.f.row(j);
        for (i, t) in target.iter_mut().enumerate() {
            *t -= scale * sq_dist(state.f.row(i), fj);
        }
        data.extend(project_unchecked(&target));
    }
    Ok(AffinityGraph::from_columns_unchecked(n, data, None))
}

/// Closed-form view weights `W_j = G⁻¹1 / (1ᵀG⁻¹1)` with `G = B_jᵀB_j`,
/// `B_j^v = S_j − S_j^v`.
///
/// A singular `G` is ridged with `δ = 1e-10 · trace/V`; an all-zero `G`
/// (S_j equal to every view) yields uniform weights.
pub fn update_w(state: &SolverState, views: &[AffinityGraph]) -> Result<Matrix> {
    let n = state.s.n();
    check_views(views, n)?;
    let nv = views.len();
    let mut w = Matrix::zeros(nv, n);
    let mut b = vec![vec![0.0; n]; nv];
    for j in 0..n {
        let sj = state.s.column(j);
        for (bv, g) in b.iter_mut().zip(views) {
            for ((o, &s), &sv) in bv.iter_mut().zip(sj).zip(g.column(j)) {
                *o = s - sv;
            }
        }
        let gram = Matrix::from_fn(nv, nv, |a, c| dot(&b[a], &b[c]));
        let weights = constrained_weights(gram)?;
        for (v, &wv) in weights.iter().enumerate() {
            w[(v, j)] = wv;
        }
    }
    Ok(w)
}

fn constrained_weights(gram: Matrix) -> Result<Vec<f64>> {
    let nv = gram.rows();
    let uniform = || vec![1.0 / nv as f64; nv];
    if nv == 1 {
        return Ok(vec![1.0]);
    }
    let trace = gram.trace();
    if trace <= 0.0 {
        return Ok(uniform());
    }
    let gram = SymMatrix::new(gram)?;
    let mut u = vec![1.0; nv];
    match Cholesky::factor_exact(&gram) {
        Some(chol) => chol.solve_in_place(&mut u),
        None => {
            // (G + δI)⁻¹ 1 through the spectrum, so exactly tied views keep
            // exactly tied weights
            let delta = 1e-10 * trace / nv as f64;
            let eig = symmetric_eigen(&gram);
            u.iter_mut().for_each(|x| *x = 0.0);
            for (i, &lambda) in eig.values.iter().enumerate() {
                let q = eig.vectors.column(i);
                let c: f64 = q.iter().sum();
                let scale = c / (lambda.max(0.0) + delta);
                for (x, qi) in u.iter_mut().zip(&q) {
                    *x += scale * qi;
                }
            }
        }
    }
    let total: f64 = u.iter().sum();
    if !(total.is_finite() && total.abs() > 0.0) {
        return Ok(uniform());
    }
    Ok(u.into_iter().map(|x| x / total).collect())
}

/// Objective value with the state's current `alpha`.
pub fn objective(
    state: &SolverState,
    views: &[AffinityGraph],
    x: &Matrix,
    hp: &Hyperparams,
) -> Result<f64> {
    objective_terms(state, views, x, hp).map(|t| t.total)
}

pub fn objective_terms(
    state: &SolverState,
    views: &[AffinityGraph],
    x: &Matrix,
    hp: &Hyperparams,
) -> Result<ObjectiveTerms> {
    let n = state.s.n();
    check_views(views, n)?;
    if state.w.shape() != (views.len(), n) {
        return Err(dim_err!(
            "W is {:?}, expected {}x{}",
            state.w.shape(),
            views.len(),
            n
        ));
    }

    let mut fusion = 0.0;
    let mut fused = vec![0.0; n];
    for j in 0..n {
        fused.copy_from_slice(state.s.column(j));
        for (v, g) in views.iter().enumerate() {
            let wv = state.w[(v, j)];
            for (o, &s) in fused.iter_mut().zip(g.column(j)) {
                *o -= wv * s;
            }
        }
        fusion += fused.iter().map(|r| r * r).sum::<f64>();
    }

    let rank = laplacian_of(&state.s).trace_form(&state.f)?;
    let regression = x.matmul(&state.p)?.sub(&state.f)?.frobenius_norm_sq();
    let sparsity: f64 = state.p.row_norms().iter().sum();
    let total = fusion + state.alpha * rank + hp.beta * (regression + hp.gamma * sparsity);
    Ok(ObjectiveTerms {
        fusion,
        rank,
        regression,
        sparsity,
        total,
    })
}

/// `‖f_i − f_j‖²` for all pairs, row-major.
pub(crate) fn indicator_distances(f: &Matrix) -> Vec<f64> {
    let n = f.rows();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = sq_dist(f.row(i), f.row(j));
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}

/// The part of the objective that depends on `S` and `W`: the fusion term
/// plus `alpha · Tr(Fᵀ L_S F)`, using precomputed indicator distances.
pub(crate) fn graph_terms(state: &SolverState, views: &[AffinityGraph], dists: &[f64]) -> f64 {
    let n = state.s.n();
    let mut fusion = 0.0;
    let mut rank = 0.0;
    for j in 0..n {
        let sj = state.s.column(j);
        for (i, &s) in sj.iter().enumerate() {
            let mut r = s;
            for (v, g) in views.iter().enumerate() {
                r -= state.w[(v, j)] * g.column(j)[i];
            }
            fusion += r * r;
            rank += s * dists[i * n + j];
        }
    }
    fusion + 0.5 * state.alpha * rank
}
