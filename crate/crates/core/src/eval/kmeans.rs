use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{config_err, Error, Result};
use crate::linalg::{sq_dist, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansOptions {
    pub max_iter: usize,
    /// Stop when the relative inertia decrease falls below this.
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub inertia: f64,
    /// `k × l` cluster centres.
    pub centroids: Matrix,
}

/// Best-inertia Lloyd clustering over `restarts` k-means++ seedings.
pub fn kmeans(data: &Matrix, k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    kmeans_with(data, k, restarts, seed, &KMeansOptions::default())
}

pub fn kmeans_with(
    data: &Matrix,
    k: usize,
    restarts: usize,
    seed: u64,
    opts: &KMeansOptions,
) -> Result<KMeansResult> {
    let n = data.rows();
    if k == 0 || k > n {
        return Err(config_err!(
            "k-means needs 1 <= k <= N, got k = {} with N = {}",
            k,
            n
        ));
    }
    if restarts == 0 {
        return Err(config_err!("k-means needs at least one restart"));
    }
    if !data.is_finite() {
        return Err(Error::NonFinite("k-means data"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts {
        let run = lloyd(data, k, &mut rng, opts);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn plus_plus_init(data: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let n = data.rows();
    let mut centroids = Matrix::zeros(k, data.cols());
    let first = rng.random_range(0..n);
    centroids.row_mut(0).copy_from_slice(data.row(first));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(data.row(i), data.row(first)))
        .collect();

    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            // guard against landing on a zero-weight tail through rounding
            while d2[chosen] == 0.0 && chosen > 0 {
                chosen -= 1;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.row_mut(c).copy_from_slice(data.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(data.row(i), data.row(pick)));
        }
    }
    centroids
}

fn assign(data: &Matrix, centroids: &Matrix, labels: &mut [usize], dist: &mut [f64]) -> f64 {
    let mut inertia = 0.0;
    for i in 0..data.rows() {
        let row = data.row(i);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for c in 0..centroids.rows() {
            let d = sq_dist(row, centroids.row(c));
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best;
        dist[i] = best_d;
        inertia += best_d;
    }
    inertia
}

fn lloyd(data: &Matrix, k: usize, rng: &mut ChaCha8Rng, opts: &KMeansOptions) -> KMeansResult {
    let (n, l) = data.shape();
    let mut centroids = plus_plus_init(data, k, rng);
    let mut labels = vec![0; n];
    let mut dist = vec![0.0; n];
    let mut inertia = assign(data, &centroids, &mut labels, &mut dist);

    for _ in 0..opts.max_iter {
        let mut sums = Matrix::zeros(k, l);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for (s, &x) in sums.row_mut(labels[i]).iter_mut().zip(data.row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // reseed an empty cluster at the point farthest from its centre
                let far = (0..n)
                    .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)))
                    .expect("n >= k >= 1");
                centroids.row_mut(c).copy_from_slice(data.row(far));
                dist[far] = 0.0;
            } else {
                let inv = 1.0 / counts[c] as f64;
                for (dst, &s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
                    *dst = s * inv;
                }
            }
        }
        let previous = inertia;
        inertia = assign(data, &centroids, &mut labels, &mut dist);
        if previous - inertia <= opts.tol * previous {
            break;
        }
    }
    KMeansResult {
        labels,
        inertia,
        centroids,
    }
}
