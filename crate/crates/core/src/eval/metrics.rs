use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, Result};

/// Contingency table between two labelings over their distinct labels.
struct Contingency {
    counts: Vec<Vec<usize>>,
    n: usize,
}

fn dense_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut uniq: Vec<usize> = labels.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    let dense = labels
        .iter()
        .map(|l| uniq.binary_search(l).expect("label present"))
        .collect();
    (dense, uniq.len())
}

fn contingency(pred: &[usize], truth: &[usize]) -> Result<Contingency> {
    if pred.len() != truth.len() {
        return Err(dim_err!(
            "labelings have lengths {} and {}",
            pred.len(),
            truth.len()
        ));
    }
    if pred.is_empty() {
        return Err(dim_err!("labelings are empty"));
    }
    let (p, kp) = dense_labels(pred);
    let (t, kt) = dense_labels(truth);
    let mut counts = vec![vec![0usize; kt]; kp];
    for (&a, &b) in p.iter().zip(&t) {
        counts[a][b] += 1;
    }
    Ok(Contingency {
        counts,
        n: pred.len(),
    })
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method
/// with potentials). Returns `assignment[row] = column`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based potentials; column 0 is a sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut owner = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Fraction of samples correctly labeled under the best one-to-one matching
/// of predicted to true labels.
pub fn clustering_accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let table = contingency(pred, truth)?;
    let kp = table.counts.len();
    let kt = table.counts[0].len();
    let size = kp.max(kt);
    let cost: Vec<Vec<f64>> = (0..size)
        .map(|a| {
            (0..size)
                .map(|b| {
                    if a < kp && b < kt {
                        -(table.counts[a][b] as f64)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let assignment = min_cost_assignment(&cost);
    let matched: usize = assignment
        .iter()
        .enumerate()
        .filter(|&(a, &b)| a < kp && b < kt)
        .map(|(a, &b)| table.counts[a][b])
        .sum();
    Ok(matched as f64 / table.n as f64)
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * libm::log(p)
        })
        .sum()
}

/// Normalized mutual information `I(pred; truth) / √(H(pred) H(truth))`.
///
/// Two single-cluster labelings score 1; a single-cluster labeling against a
/// multi-cluster one scores 0.
pub fn nmi(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let table = contingency(pred, truth)?;
    let n = table.n as f64;
    let kt = table.counts[0].len();
    let row_sums: Vec<usize> = table.counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<usize> = (0..kt)
        .map(|b| table.counts.iter().map(|r| r[b]).sum())
        .collect();
    let hp = entropy(row_sums.iter().copied(), n);
    let ht = entropy(col_sums.iter().copied(), n);
    if hp == 0.0 && ht == 0.0 {
        return Ok(1.0);
    }
    if hp == 0.0 || ht == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (a, row) in table.counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if c > 0 {
                let pab = c as f64 / n;
                mi += pab * libm::log(pab * n * n / (row_sums[a] as f64 * col_sums[b] as f64));
            }
        }
    }
    Ok((mi / libm::sqrt(hp * ht)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_permuted() {
        let truth = [0, 0, 1, 1, 2, 2];
        assert_eq!(clustering_accuracy(&truth, &truth).unwrap(), 1.0);
        let permuted = [2, 2, 0, 0, 1, 1];
        assert_eq!(clustering_accuracy(&permuted, &truth).unwrap(), 1.0);
        assert!((nmi(&permuted, &truth).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_labelings_have_zero_nmi() {
        // product design: every (a, b) pair appears equally often
        let pred = [0, 0, 1, 1, 0, 0, 1, 1];
        let truth = [0, 1, 0, 1, 2, 3, 2, 3];
        assert!(nmi(&pred, &truth).unwrap().abs() < 1e-12);
    }

    #[test]
    fn two_by_two_table() {
        // [[5,1],[1,5]]: H = ln 2 for both sides, and
        // I = 2·(5/12)·ln((5/12)/(1/4)) + 2·(1/12)·ln((1/12)/(1/4))
        let mut pred = Vec::new();
        let mut truth = Vec::new();
        for (a, b, c) in [(0, 0, 5), (0, 1, 1), (1, 0, 1), (1, 1, 5)] {
            for _ in 0..c {
                pred.push(a);
                truth.push(b);
            }
        }
        let h = libm::log(2.0);
        let i =
            2.0 * (5.0 / 12.0) * libm::log(5.0 / 3.0) + 2.0 * (1.0 / 12.0) * libm::log(1.0 / 3.0);
        assert!((nmi(&pred, &truth).unwrap() - i / h).abs() < 1e-12);
        assert!((clustering_accuracy(&pred, &truth).unwrap() - 10.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_entropy() {
        assert_eq!(nmi(&[3, 3, 3], &[1, 1, 1]).unwrap(), 1.0);
        assert_eq!(nmi(&[0, 0, 0, 0], &[0, 0, 1, 1]).unwrap(), 0.0);
        assert_eq!(
            clustering_accuracy(&[0, 0, 0, 0], &[0, 0, 1, 1]).unwrap(),
            0.5
        );
    }

    #[test]
    fn mismatched_lengths() {
        assert!(clustering_accuracy(&[0, 1], &[0]).is_err());
        assert!(nmi(&[], &[]).is_err());
    }

    #[test]
    fn assignment_small() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let a = min_cost_assignment(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5.0);
    }
}
