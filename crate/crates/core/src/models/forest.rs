//! Bagged CART forest with per-split feature subsampling and out-of-bag
//! predictions.

use alloc::vec::Vec;

use rand::{Rng as _, RngCore};

use super::tree::{DecisionTree, TreeParams};
use crate::dataset::{LabeledDataset, TimePrior};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::rng::{derived_rng, stream};

/// Number of features considered at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSubsample {
    All,
    Sqrt,
    Count(usize),
}

impl FeatureSubsample {
    pub fn count(self, dim: usize) -> usize {
        match self {
            FeatureSubsample::All => dim,
            FeatureSubsample::Sqrt => (libm::sqrt(dim as f64) as usize).max(1),
            FeatureSubsample::Count(k) => k.clamp(1, dim.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestParams {
    pub n_trees: usize,
    pub tree: TreeParams,
    pub feature_subsample: FeatureSubsample,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            tree: TreeParams { max_depth: 8, min_leaf_size: 3 },
            feature_subsample: FeatureSubsample::Sqrt,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    /// In-bag index multiset of each tree, sorted.
    in_bag: Vec<Vec<usize>>,
    tree_seeds: Vec<u64>,
    /// Size of the dataset the forest was fit against (OOB bookkeeping).
    n_source: usize,
    dim: usize,
    n_time_labels: usize,
}

impl RandomForest {
    /// Each tree draws `indices.len()` samples with replacement from
    /// `indices`. Per-tree randomness derives from `seed` and the tree index,
    /// so trees can be trained in any order.
    pub fn fit(ds: &LabeledDataset, indices: &[usize], params: &ForestParams, seed: u64) -> Result<Self> {
        if params.n_trees == 0 {
            return Err(Error::InvalidParameter("n_trees must be at least 1"));
        }
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let fitted = map_indexed(params.n_trees, |t| {
            let mut rng = derived_rng(seed, stream::TREE, t as u64);
            let mut bag: Vec<usize> = (0..indices.len()).map(|_| indices[rng.random_range(0..indices.len())]).collect();
            bag.sort_unstable();
            let tree_seed = rng.next_u64();
            let tree = DecisionTree::fit(ds, &bag, &params.tree, params.feature_subsample, tree_seed);
            (tree, bag, tree_seed)
        });
        let mut trees = Vec::with_capacity(params.n_trees);
        let mut in_bag = Vec::with_capacity(params.n_trees);
        let mut tree_seeds = Vec::with_capacity(params.n_trees);
        for (t, b, s) in fitted {
            trees.push(t);
            in_bag.push(b);
            tree_seeds.push(s);
        }
        Ok(Self { trees, in_bag, tree_seeds, n_source: ds.len(), dim: ds.dim(), n_time_labels: ds.n_time_labels() })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn in_bag(&self, tree: usize) -> &[usize] {
        &self.in_bag[tree]
    }

    pub fn tree_seed(&self, tree: usize) -> u64 {
        self.tree_seeds[tree]
    }

    pub(crate) fn predict_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.trees {
            for (o, p) in out.iter_mut().zip(&t.leaf_distribution(x).probs) {
                *o += p;
            }
        }
        let m = self.trees.len() as f64;
        out.iter_mut().for_each(|o| *o /= m);
    }

    /// Mean prediction over the trees whose bootstrap excluded each sample of
    /// `ds` (the dataset the forest was fit against). `None` marks samples
    /// that were in-bag for every tree.
    pub fn oob_predictions(&self, ds: &LabeledDataset) -> Result<Vec<Option<TimePrior>>> {
        if ds.len() != self.n_source {
            return Err(Error::LengthMismatch { expected: self.n_source, found: ds.len() });
        }
        let k = self.n_time_labels;
        let mut sums = alloc::vec![0.0; ds.len() * k];
        let mut hits = alloc::vec![0usize; ds.len()];
        let mut in_bag = alloc::vec![false; ds.len()];
        for (tree, bag) in self.trees.iter().zip(&self.in_bag) {
            in_bag.iter_mut().for_each(|b| *b = false);
            for &i in bag {
                in_bag[i] = true;
            }
            for i in (0..ds.len()).filter(|&i| !in_bag[i]) {
                hits[i] += 1;
                let dist = tree.leaf_distribution(ds.features(i));
                for (s, p) in sums[i * k..(i + 1) * k].iter_mut().zip(&dist.probs) {
                    *s += p;
                }
            }
        }
        Ok((0..ds.len())
            .map(|i| {
                (hits[i] > 0)
                    .then(|| TimePrior { probs: sums[i * k..(i + 1) * k].iter().map(|s| s / hits[i] as f64).collect() })
            })
            .collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_time_labels(&self) -> usize {
        self.n_time_labels
    }
}
