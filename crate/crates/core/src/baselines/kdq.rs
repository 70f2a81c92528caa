use alloc::vec::Vec;

use super::LocalTestResult;
use crate::dataset::{time_label_prior, LabeledDataset, TimePrior};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KdqParams {
    /// Nodes with at most this many samples are not split.
    pub min_leaf_size: usize,
    pub max_depth: usize,
}

impl Default for KdqParams {
    fn default() -> Self {
        Self { min_leaf_size: 10, max_depth: 20 }
    }
}

/// kdq-tree localization. The tree ignores time labels: it halves the node's
/// bounding box at the midpoint, cycling through axes. Each leaf is scored by
/// `KL(smoothed leaf label distribution ‖ global prior)` and every sample
/// inherits its leaf's score.
pub fn kdq_tree_localize(ds: &LabeledDataset, params: &KdqParams) -> Result<LocalTestResult> {
    let d = ds.dim();
    let mut lo = alloc::vec![f64::INFINITY; d];
    let mut hi = alloc::vec![f64::NEG_INFINITY; d];
    for s in ds.samples() {
        for (j, &v) in s.features.iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let prior = time_label_prior(ds);
    let mut scores = alloc::vec![0.0; ds.len()];
    let all: Vec<usize> = (0..ds.len()).collect();
    partition(ds, params, &prior, all, &mut lo, &mut hi, 0, &mut scores);
    Ok(LocalTestResult::scores(scores))
}

#[allow(clippy::too_many_arguments)]
fn partition(
    ds: &LabeledDataset,
    params: &KdqParams,
    prior: &TimePrior,
    idx: Vec<usize>,
    lo: &mut [f64],
    hi: &mut [f64],
    depth: usize,
    scores: &mut [f64],
) {
    if idx.is_empty() {
        return;
    }
    if idx.len() <= params.min_leaf_size || depth >= params.max_depth || ds.dim() == 0 {
        let mut counts = alloc::vec![0; ds.n_time_labels()];
        for &i in &idx {
            counts[ds.label(i)] += 1;
        }
        let kl = TimePrior::smoothed(&counts).kl_divergence(prior);
        for &i in &idx {
            scores[i] = kl;
        }
        return;
    }
    let axis = depth % ds.dim();
    let mid = lo[axis] + (hi[axis] - lo[axis]) / 2.0;
    let (left, right): (Vec<usize>, Vec<usize>) = idx.into_iter().partition(|&i| ds.features(i)[axis] <= mid);
    let (old_lo, old_hi) = (lo[axis], hi[axis]);
    hi[axis] = mid;
    partition(ds, params, prior, left, lo, hi, depth + 1, scores);
    hi[axis] = old_hi;
    lo[axis] = mid;
    partition(ds, params, prior, right, lo, hi, depth + 1, scores);
    lo[axis] = old_lo;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::make_window_pair;
    use alloc::vec;

    #[test]
    fn identical_windows_score_zero() {
        let pts: Vec<Vec<f64>> = (0..40).map(|i| vec![(i * 7 % 13) as f64, (i % 5) as f64]).collect();
        let ds = make_window_pair(pts.clone(), pts).unwrap();
        let r = kdq_tree_localize(&ds, &KdqParams { min_leaf_size: 4, max_depth: 20 }).unwrap();
        assert!(r.values.iter().all(|&v| v.abs() < 1e-15), "{:?}", r.values);
    }

    #[test]
    fn pure_before_leaf_matches_hand_kl() {
        // Ten before-window points at 0..1 and ten after-window points far away:
        // the first midpoint split separates them into two pure leaves of 10.
        let before: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 * 0.1]).collect();
        let after: Vec<Vec<f64>> = (0..10).map(|i| vec![100.0 + i as f64 * 0.1]).collect();
        let ds = make_window_pair(before, after).unwrap();
        let r = kdq_tree_localize(&ds, &KdqParams::default()).unwrap();
        let expected = 11.0 / 12.0 * libm::log((11.0 / 12.0) / 0.5) + 1.0 / 12.0 * libm::log((1.0 / 12.0) / 0.5);
        for v in r.values {
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn single_leaf_gives_constant_scores() {
        let before: Vec<Vec<f64>> = (0..15).map(|i| vec![i as f64]).collect();
        let after: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 * 3.0]).collect();
        let ds = make_window_pair(before, after).unwrap();
        let r = kdq_tree_localize(&ds, &KdqParams { min_leaf_size: 1, max_depth: 0 }).unwrap();
        assert!(r.values.iter().all(|&v| v == r.values[0]));
    }
}
