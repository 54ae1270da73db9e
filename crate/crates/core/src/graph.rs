//! Affinity graphs, their Laplacians, and connected-component counting.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, dim_err, Error, Result};
use crate::linalg::{sq_dist, Matrix};
use crate::numerics::{SymMatrix, SIMPLEX_TOL};

/// Default edge threshold for [`connected_components`].
pub const COMPONENT_THRESHOLD: f64 = 1e-8;

/// An `n × n` column-stochastic similarity structure.
///
/// Column `j` holds the similarities of every point to point `j` and lies on
/// the probability simplex. Stored column-major so columns are contiguous.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffinityGraph {
    n: usize,
    data: Vec<f64>,
    view_id: Option<String>,
}

impl AffinityGraph {
    /// Builds a graph from column-major data, validating every column.
    pub fn from_columns(n: usize, data: Vec<f64>, view_id: Option<String>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(dim_err!(
                "{} values for a {}x{} affinity graph",
                data.len(),
                n,
                n
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("affinity graph"));
        }
        for j in 0..n {
            let col = &data[j * n..(j + 1) * n];
            if let Some(v) = col.iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::Invariant(alloc::format!(
                    "column {j} has entry {v} outside [0, 1]"
                )));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::Invariant(alloc::format!("column {j} sums to {sum}")));
            }
        }
        Ok(Self { n, data, view_id })
    }

    /// Builds a graph from a dense matrix whose columns are the similarity
    /// columns.
    pub fn from_matrix(m: &Matrix, view_id: Option<String>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(dim_err!(
                "affinity matrix must be square, got {:?}",
                m.shape()
            ));
        }
        Self::from_columns(m.rows(), m.transpose().into_vec(), view_id)
    }

    pub(crate) fn from_columns_unchecked(
        n: usize,
        data: Vec<f64>,
        view_id: Option<String>,
    ) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data, view_id }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn view_id(&self) -> Option<&str> {
        self.view_id.as_deref()
    }

    pub fn with_view_id(mut self, id: impl Into<String>) -> Self {
        self.view_id = Some(id.into());
        self
    }

    /// Column `j`: similarities of all points to point `j`.
    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    /// Entry `S_ij`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n + i]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// `(S + Sᵀ)/2` entry.
    #[inline]
    pub fn symmetric_weight(&self, i: usize, j: usize) -> f64 {
        0.5 * (self.get(i, j) + self.get(j, i))
    }

    /// Largest deviation of a column sum from 1 and most negative entry.
    pub fn simplex_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            let col = self.column(j);
            let sum: f64 = col.iter().sum();
            worst = worst.max((sum - 1.0).abs());
            for &v in col {
                worst = worst.max(-v);
            }
        }
        worst
    }

    pub fn diagonal_mass(&self) -> f64 {
        (0..self.n).map(|j| self.get(j, j)).sum::<f64>() / self.n as f64
    }
}

/// Builds a k-nearest-neighbour heat-kernel graph from `x_v` (rows = samples).
///
/// Column `j` is supported on the `k_neighbors` points closest to `j` (ties
/// broken by index) with weights `exp(−d²/(2σ_j²))`, σ_j the distance to the
/// k-th neighbour, normalized to sum to one. When σ_j is zero the weights are
/// uniform. The diagonal is zero.
pub fn build_view_affinity(x_v: &Matrix, k_neighbors: usize) -> Result<AffinityGraph> {
    let n = x_v.rows();
    if k_neighbors == 0 || k_neighbors >= n {
        return Err(config_err!(
            "k_neighbors = {} requires between 1 and N - 1 = {} neighbours",
            k_neighbors,
            n.saturating_sub(1)
        ));
    }
    if !x_v.is_finite() {
        return Err(Error::NonFinite("view features"));
    }

    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sq_dist(x_v.row(i), x_v.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut data = vec![0.0; n * n];
    let mut candidates: Vec<usize> = Vec::with_capacity(n);
    for j in 0..n {
        let dj = &dist[j * n..(j + 1) * n];
        candidates.clear();
        candidates.extend((0..n).filter(|&i| i != j));
        candidates.sort_by(|&a, &b| dj[a].total_cmp(&dj[b]).then(a.cmp(&b)));
        let neighbors = &candidates[..k_neighbors];

        let sigma_sq = dj[neighbors[k_neighbors - 1]];
        let col = &mut data[j * n..(j + 1) * n];
        if sigma_sq > 0.0 {
            let mut total = 0.0;
            for &i in neighbors {
                let w = libm::exp(-dj[i] / (2.0 * sigma_sq));
                col[i] = w;
                total += w;
            }
            for &i in neighbors {
                col[i] /= total;
            }
        } else {
            let w = 1.0 / k_neighbors as f64;
            for &i in neighbors {
                col[i] = w;
            }
        }
    }
    Ok(AffinityGraph::from_columns_unchecked(n, data, None))
}

/// Graph Laplacian `L = D − (S + Sᵀ)/2` with `D` the row sums of the
/// symmetrized weights.
#[derive(Debug, Clone)]
pub struct Laplacian {
    pub matrix: SymMatrix,
    pub degree: Vec<f64>,
}

impl Laplacian {
    /// `Tr(Fᵀ L F)`.
    pub fn trace_form(&self, f: &Matrix) -> Result<f64> {
        self.matrix.quadratic_trace(f)
    }
}

pub fn laplacian_of(s: &AffinityGraph) -> Laplacian {
    let n = s.n();
    let mut m = Matrix::zeros(n, n);
    let mut degree = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let w = s.symmetric_weight(i, j);
            m[(i, j)] = -w;
            degree[i] += w;
        }
    }
    for i in 0..n {
        m[(i, i)] += degree[i];
    }
    let matrix = SymMatrix::new(m).expect("laplacian of a validated graph is finite and square");
    Laplacian { matrix, degree }
}

/// Number of connected components of the undirected graph with an edge
/// `(i, j)` whenever `(S_ij + S_ji)/2 > threshold`.
pub fn connected_components(s: &AffinityGraph, threshold: f64) -> usize {
    let n = s.n();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut components = n;
    for j in 0..n {
        for i in (j + 1)..n {
            if s.symmetric_weight(i, j) > threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                    components -= 1;
                }
            }
        }
    }
    components
}
