use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::LocalTestResult;
use crate::conformal::{select_coverage_maximizing_bootstraps, PValueTable};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::models::{DecisionTree, FeatureSubsample, TreeParams};
use crate::par::map_indexed;
use crate::rng::{derive_seed, derived_rng, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MbdlParams {
    pub n_boot: usize,
    pub n_perm: usize,
    pub tree: TreeParams,
    pub bootstrap_pool_factor: usize,
}

impl Default for MbdlParams {
    fn default() -> Self {
        Self { n_boot: 100, n_perm: 100, tree: TreeParams::default(), bootstrap_pool_factor: 10 }
    }
}

/// Empirical entropy (nats) of a label histogram. Counts are sorted first so
/// that histograms equal up to relabelling give bit-identical values.
pub fn leaf_entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mut c = counts.to_vec();
    c.sort_unstable();
    let t = total as f64;
    -c.iter()
        .filter(|&&v| v > 0)
        .map(|&v| {
            let p = v as f64 / t;
            p * libm::log(p)
        })
        .sum::<f64>()
}

fn leaf_entropies(leaf_of: &[usize], labels: &[usize], n_leaves: usize, k: usize) -> Vec<f64> {
    let mut counts = alloc::vec![0usize; n_leaves * k];
    for (&leaf, &y) in leaf_of.iter().zip(labels) {
        counts[leaf * k + y] += 1;
    }
    counts.chunks(k).map(leaf_entropy).collect()
}

/// Model-based localization with permutation calibration.
///
/// Per bootstrap, a decision tree predicting the time label is grown on the
/// in-bag samples and the out-of-bag samples are routed to its leaves. A
/// leaf's statistic is the entropy of its out-of-bag labels (maximal for a
/// non-drifting region); its p-value is
/// `(1 + #{permutations with entropy ≤ observed}) / (1 + n_perm)` where each
/// permutation shuffles the out-of-bag labels. In-bag samples take their
/// leaf's p-value (1 for leaves without out-of-bag samples); bootstraps are
/// merged with the same median as the conformal method.
pub fn mbdl_permutation_localize(ds: &LabeledDataset, params: &MbdlParams, seed: u64) -> Result<LocalTestResult> {
    if params.n_boot == 0 || params.n_perm == 0 {
        return Err(Error::InvalidParameter("MB-DL needs n_boot >= 1 and n_perm >= 1"));
    }
    let n = ds.len();
    let k = ds.n_time_labels();
    let splits = select_coverage_maximizing_bootstraps(n, params.n_boot, params.bootstrap_pool_factor, seed)?;
    let per_boot = map_indexed(splits.len(), |t| {
        let split = &splits[t];
        let boot_seed = derive_seed(seed, stream::TRAIN, t as u64);
        let tree = DecisionTree::fit(ds, &split.in_bag, &params.tree, FeatureSubsample::All, boot_seed);
        let n_leaves = tree.n_leaves();
        let leaf_of: Vec<usize> = split.oob.iter().map(|&i| tree.leaf_id(ds.features(i))).collect();
        let mut labels: Vec<usize> = split.oob.iter().map(|&i| ds.label(i)).collect();
        let mut occupied = alloc::vec![false; n_leaves];
        for &l in &leaf_of {
            occupied[l] = true;
        }
        let observed = leaf_entropies(&leaf_of, &labels, n_leaves, k);
        let mut at_most = alloc::vec![0usize; n_leaves];
        for r in 0..params.n_perm {
            labels.shuffle(&mut derived_rng(boot_seed, stream::PERMUTATION, r as u64));
            for (c, (perm, obs)) in
                at_most.iter_mut().zip(leaf_entropies(&leaf_of, &labels, n_leaves, k).iter().zip(&observed))
            {
                if perm <= obs {
                    *c += 1;
                }
            }
        }
        let leaf_p: Vec<f64> = (0..n_leaves)
            .map(|l| if occupied[l] { (1 + at_most[l]) as f64 / (1 + params.n_perm) as f64 } else { 1.0 })
            .collect();
        split.unique_in_bag().into_iter().map(|i| (i, leaf_p[tree.leaf_id(ds.features(i))])).collect::<Vec<_>>()
    });
    let mut lists = alloc::vec![Vec::new(); n];
    for boot in per_boot {
        for (i, p) in boot {
            lists[i].push(p);
        }
    }
    Ok(LocalTestResult::from_p_values(&PValueTable::from_lists(lists)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_no_drift_stream;

    #[test]
    fn entropy_values() {
        assert!((leaf_entropy(&[5, 5]) - libm::log(2.0)).abs() < 1e-15);
        assert_eq!(leaf_entropy(&[10, 0]), 0.0);
        assert_eq!(leaf_entropy(&[3, 7]), leaf_entropy(&[7, 3]));
        assert_eq!(leaf_entropy(&[]), 0.0);
    }

    #[test]
    fn single_permutation_gives_half_or_one() {
        let (ds, _) = generate_no_drift_stream(60, 2, 1).unwrap();
        let params = MbdlParams { n_boot: 5, n_perm: 1, ..Default::default() };
        let r = mbdl_permutation_localize(&ds, &params, 2).unwrap();
        for (v, a) in r.values.iter().zip(&r.assigned) {
            if *a {
                assert!(*v == 0.5 || *v == 1.0, "{v}");
            }
        }
    }

    #[test]
    fn zero_permutations_rejected() {
        let (ds, _) = generate_no_drift_stream(20, 2, 1).unwrap();
        let params = MbdlParams { n_perm: 0, ..Default::default() };
        assert!(mbdl_permutation_localize(&ds, &params, 0).is_err());
    }
}
