use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::LocalTestResult;
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::eval::Orientation;
use crate::rng::{derived_rng, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LddParams {
    /// Neighbourhood size; `None` uses `min(20, n / 5)`.
    pub k: Option<usize>,
    /// Label permutations for the null distribution; 0 returns raw `|δ|`.
    pub n_resample: usize,
}

impl Default for LddParams {
    fn default() -> Self {
        Self { k: None, n_resample: 100 }
    }
}

impl LddParams {
    pub fn resolved_k(&self, n: usize) -> usize {
        self.k.unwrap_or_else(|| (n / 5).clamp(1, 20))
    }
}

/// Smoothed local drift degree
/// `δ = ((k₂ + 1) / |W₁|) / ((k₁ + 1) / |W₀|) − 1`, where `k₀`/`k₁` count
/// neighbours from the before/after window.
pub fn local_drift_degree(k_before: usize, k_after: usize, n_before: usize, n_after: usize) -> f64 {
    ((k_after + 1) as f64 / n_after as f64) / ((k_before + 1) as f64 / n_before as f64) - 1.0
}

/// Indices of the `k` nearest neighbours (Euclidean, self excluded, ties by
/// index) of every sample.
fn neighbourhoods(ds: &LabeledDataset, k: usize) -> Vec<Vec<usize>> {
    let n = ds.len();
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(n);
    (0..n)
        .map(|i| {
            dist.clear();
            let xi = ds.features(i);
            dist.extend((0..n).filter(|&j| j != i).map(|j| {
                let d2: f64 = xi.iter().zip(ds.features(j)).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, j)
            }));
            dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut nb: Vec<usize> = dist[..k].iter().map(|&(_, j)| j).collect();
            nb.sort_unstable();
            nb
        })
        .collect()
}

fn abs_degrees(neigh: &[Vec<usize>], labels: &[usize], n_before: usize, n_after: usize) -> Vec<f64> {
    neigh
        .iter()
        .map(|nb| {
            let k_after = nb.iter().filter(|&&j| labels[j] == 1).count();
            libm::fabs(local_drift_degree(nb.len() - k_after, k_after, n_before, n_after))
        })
        .collect()
}

/// LDD-DIS style localization for two windows. The score of a sample is the
/// fraction of a pooled label-permutation null distribution of `|δ|` lying
/// strictly below its observed `|δ|`.
pub fn ldd_dis_localize(ds: &LabeledDataset, params: &LddParams, seed: u64) -> Result<LocalTestResult> {
    if ds.n_time_labels() != 2 {
        return Err(Error::InvalidParameter("LDD-DIS needs exactly two windows"));
    }
    let n = ds.len();
    let k = params.resolved_k(n);
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter("LDD-DIS needs 0 < k < n"));
    }
    let counts = ds.label_counts();
    let neigh = neighbourhoods(ds, k);
    let mut labels = ds.labels();
    let observed = abs_degrees(&neigh, &labels, counts[0], counts[1]);
    if params.n_resample == 0 {
        return Ok(LocalTestResult::scores(observed));
    }
    let mut null = Vec::with_capacity(n * params.n_resample);
    for r in 0..params.n_resample {
        labels.shuffle(&mut derived_rng(seed, stream::PERMUTATION, r as u64));
        null.extend(abs_degrees(&neigh, &labels, counts[0], counts[1]));
    }
    null.sort_unstable_by(f64::total_cmp);
    let total = null.len() as f64;
    let values = observed.iter().map(|&o| null.partition_point(|&v| v < o) as f64 / total).collect();
    Ok(LocalTestResult { values, orientation: Orientation::Score, assigned: alloc::vec![true; n] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::make_window_pair;
    use alloc::vec;

    #[test]
    fn degree_examples() {
        assert_eq!(local_drift_degree(5, 5, 50, 50), 0.0);
        assert_eq!(local_drift_degree(0, 10, 50, 50), 10.0);
        assert_eq!(local_drift_degree(10, 0, 50, 50), 1.0 / 11.0 - 1.0);
    }

    #[test]
    fn balanced_neighbourhood_is_symmetric_under_window_swap() {
        for k1 in 0..8 {
            let d = local_drift_degree(k1, k1, 30, 30);
            assert_eq!(d, local_drift_degree(k1, k1, 30, 30));
            assert_eq!(d, 0.0);
        }
        // Unbalanced: swapping windows maps δ to 1/(1+δ) − 1, order-reversing.
        let a = local_drift_degree(2, 7, 30, 30);
        let b = local_drift_degree(7, 2, 30, 30);
        assert!(((1.0 + a) * (1.0 + b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raw_scores_without_resampling() {
        // Points 0..9 in window 0, 100..109 in window 1: each neighbourhood
        // (k = 9) is one-sided, δ = 1/10 − 1 or 10 − 1.
        let before: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let after: Vec<Vec<f64>> = (0..10).map(|i| vec![100.0 + i as f64]).collect();
        let ds = make_window_pair(before, after).unwrap();
        let r = ldd_dis_localize(&ds, &LddParams { k: Some(9), n_resample: 0 }, 0).unwrap();
        assert_eq!(r.orientation, Orientation::Score);
        assert!((r.values[0] - 0.9).abs() < 1e-12);
        assert!((r.values[15] - 9.0).abs() < 1e-12);
    }

    #[test]
    fn k_must_be_below_n() {
        let ds = make_window_pair(vec![vec![0.0]; 3], vec![vec![1.0]; 3]).unwrap();
        assert!(ldd_dis_localize(&ds, &LddParams { k: Some(6), n_resample: 0 }, 0).is_err());
    }

    #[test]
    fn resampled_scores_are_ecdf_values() {
        let before: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let after: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 + 0.5]).collect();
        let ds = make_window_pair(before, after).unwrap();
        let r = ldd_dis_localize(&ds, &LddParams { k: Some(6), n_resample: 20 }, 3).unwrap();
        assert!(r.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
