//! Greedy binary CART on Gini impurity over time labels.

use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng as _;

use super::FeatureSubsample;
use crate::dataset::{LabeledDataset, TimePrior};
use crate::rng::{rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Minimum number of (weighted) samples on each side of a split.
    pub min_leaf_size: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 4, min_leaf_size: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { id: usize, distribution: TimePrior },
}

/// Arena-stored tree; node 0 is the root. Samples with
/// `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_leaves: usize,
    dim: usize,
    n_time_labels: usize,
}

struct Builder<'a> {
    ds: &'a LabeledDataset,
    params: &'a TreeParams,
    subsample: FeatureSubsample,
    rng: Rng,
    nodes: Vec<Node>,
    n_leaves: usize,
}

/// Sum of squared label counts over node size; larger is purer. Maximizing
/// the size-weighted sum over both children is equivalent to minimizing the
/// weighted Gini impurity.
fn purity(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    counts.iter().map(|&c| (c * c) as f64).sum::<f64>() / n as f64
}

const TIE_EPS: f64 = 1e-12;

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.ds.n_time_labels()];
        for &i in idx {
            counts[self.ds.label(i)] += 1;
        }
        counts
    }

    fn leaf(&mut self, counts: &[usize]) -> usize {
        let id = self.n_leaves;
        self.n_leaves += 1;
        self.nodes.push(Node::Leaf { id, distribution: TimePrior::smoothed(counts) });
        self.nodes.len() - 1
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let d = self.ds.dim();
        let k = self.subsample.count(d);
        if k >= d {
            return (0..d).collect();
        }
        let mut f = index::sample(&mut self.rng, d, k).into_vec();
        f.sort_unstable();
        f
    }

    /// Best `(feature, threshold)` by weighted Gini, ties broken uniformly at
    /// random. Candidates are enumerated in (feature, threshold) order, which
    /// does not depend on the order of `idx`.
    fn best_split(&mut self, idx: &[usize], counts: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len();
        let k = counts.len();
        let min_leaf = self.params.min_leaf_size.max(1);
        let parent = purity(counts, n);
        let mut best = parent + TIE_EPS;
        let mut ties: Vec<(usize, f64)> = Vec::new();
        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(n);
        for feature in self.candidate_features() {
            pairs.clear();
            pairs.extend(idx.iter().map(|&i| (self.ds.features(i)[feature], self.ds.label(i))));
            pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut left = alloc::vec![0usize; k];
            for j in 0..n - 1 {
                left[pairs[j].1] += 1;
                let (lo, hi) = (pairs[j].0, pairs[j + 1].0);
                if lo == hi {
                    continue;
                }
                let n_left = j + 1;
                let n_right = n - n_left;
                if n_left < min_leaf || n_right < min_leaf {
                    continue;
                }
                let right: Vec<usize> = counts.iter().zip(&left).map(|(c, l)| c - l).collect();
                let score = purity(&left, n_left) + purity(&right, n_right);
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                if score > best + TIE_EPS {
                    best = score;
                    ties.clear();
                    ties.push((feature, threshold));
                } else if score >= best - TIE_EPS {
                    ties.push((feature, threshold));
                }
            }
        }
        match ties.len() {
            0 => None,
            1 => Some(ties[0]),
            m => Some(ties[self.rng.random_range(0..m)]),
        }
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&idx);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || depth >= self.params.max_depth || idx.len() < 2 * self.params.min_leaf_size.max(1) {
            return self.leaf(&counts);
        }
        let Some((feature, threshold)) = self.best_split(&idx, &counts) else {
            return self.leaf(&counts);
        };
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.ds.features(i)[feature] <= threshold);
        let slot = self.nodes.len();
        self.nodes.push(Node::Split { feature, threshold, left: 0, right: 0 });
        let left = self.build(left_idx, depth + 1);
        let right = self.build(right_idx, depth + 1);
        self.nodes[slot] = Node::Split { feature, threshold, left, right };
        slot
    }
}

impl DecisionTree {
    /// Fits on `indices` into `ds`. `seed` only drives tie-breaking between
    /// equally good splits and per-split feature subsampling.
    pub fn fit(
        ds: &LabeledDataset,
        indices: &[usize],
        params: &TreeParams,
        subsample: FeatureSubsample,
        seed: u64,
    ) -> Self {
        let mut b = Builder { ds, params, subsample, rng: rng_from_seed(seed), nodes: Vec::new(), n_leaves: 0 };
        b.build(indices.to_vec(), 0);
        Self { nodes: b.nodes, n_leaves: b.n_leaves, dim: ds.dim(), n_time_labels: ds.n_time_labels() }
    }

    fn leaf_node(&self, x: &[f64]) -> &Node {
        let mut node = &self.nodes[0];
        while let Node::Split { feature, threshold, left, right } = node {
            node = if x[*feature] <= *threshold { &self.nodes[*left] } else { &self.nodes[*right] };
        }
        node
    }

    pub fn leaf_id(&self, x: &[f64]) -> usize {
        match self.leaf_node(x) {
            Node::Leaf { id, .. } => *id,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn leaf_distribution(&self, x: &[f64]) -> &TimePrior {
        match self.leaf_node(x) {
            Node::Leaf { distribution, .. } => distribution,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    /// `(feature, threshold)` of the root split, if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match &self.nodes[0] {
            Node::Split { feature, threshold, .. } => Some((*feature, *threshold)),
            Node::Leaf { .. } => None,
        }
    }

    /// Leaf distributions in leaf-id order.
    pub fn leaf_distributions(&self) -> Vec<&TimePrior> {
        let mut out: Vec<(usize, &TimePrior)> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { id, distribution } => Some((*id, distribution)),
                Node::Split { .. } => None,
            })
            .collect();
        out.sort_unstable_by_key(|(id, _)| *id);
        out.into_iter().map(|(_, d)| d).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_time_labels(&self) -> usize {
        self.n_time_labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{train_decision_tree, ProbabilisticModel};
    use alloc::vec;

    fn one_d(xs: &[f64], ys: &[usize]) -> LabeledDataset {
        LabeledDataset::from_parts(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec(), 2).unwrap()
    }

    fn tree(m: ProbabilisticModel) -> DecisionTree {
        match m {
            ProbabilisticModel::DecisionTree(t) => t,
            _ => unreachable!(),
        }
    }

    #[test]
    fn two_points_one_split() {
        let ds = one_d(&[0.0, 1.0], &[0, 1]);
        let t = tree(train_decision_tree(&ds, &TreeParams { max_depth: 1, min_leaf_size: 1 }, 0));
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.root_split(), Some((0, 0.5)));
        assert_eq!(t.leaf_distribution(&[0.0]).probs, vec![2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(t.leaf_distribution(&[1.0]).probs, vec![1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn depth_zero_is_smoothed_prior() {
        let ds = one_d(&[0.0, 1.0, 2.0, 3.0], &[0, 0, 0, 1]);
        let m = train_decision_tree(&ds, &TreeParams { max_depth: 0, min_leaf_size: 1 }, 3);
        for x in [-5.0, 0.5, 100.0] {
            assert_eq!(m.predict_proba(&[x]).unwrap().probs, vec![4.0 / 6.0, 2.0 / 6.0]);
            assert_eq!(m.leaf_id(&[x]).unwrap(), 0);
        }
    }

    #[test]
    fn pure_leaves_on_separable_line() {
        // Brute force: thresholds at 0.5, 5.5, 10.5 give weighted Gini 1/3, 0, 1/3.
        let ds = one_d(&[0.0, 1.0, 10.0, 11.0], &[0, 0, 1, 1]);
        let t = tree(train_decision_tree(&ds, &TreeParams { max_depth: 2, min_leaf_size: 1 }, 0));
        let (f, thr) = t.root_split().unwrap();
        assert_eq!(f, 0);
        assert!(thr > 1.0 && thr < 10.0);
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.leaf_distribution(&[0.5]).probs, vec![0.75, 0.25]);
        let left = t.leaf_id(&[0.5]);
        assert_eq!(t.leaf_id(&[0.5]), left);
        assert_ne!(t.leaf_id(&[10.5]), left);
    }

    #[test]
    fn leaf_id_on_non_tree_errors() {
        let ds = one_d(&[0.0, 1.0], &[0, 1]);
        let m = crate::models::train_mlp(&ds, &crate::models::MlpParams { epochs: 1, ..Default::default() }, 0);
        assert_eq!(m.leaf_id(&[0.0]), Err(crate::Error::NotATree));
        assert!(m.predict_proba(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn min_leaf_size_respected() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<usize> = (0..20).map(|i| usize::from(i % 3 == 0)).collect();
        let ds = one_d(&xs, &ys);
        let t = tree(train_decision_tree(&ds, &TreeParams { max_depth: 10, min_leaf_size: 4 }, 1));
        for d in t.leaf_distributions() {
            assert!(d.probs.iter().all(|&p| p > 0.0));
        }
        let mut sizes = vec![0usize; t.n_leaves()];
        for x in &xs {
            sizes[t.leaf_id(&[*x])] += 1;
        }
        assert!(sizes.iter().all(|&s| s >= 4), "{sizes:?}");
    }
}
