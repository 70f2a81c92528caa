//! Probabilistic time-label classifiers used as class-wise scoring functions.
//!
//! All models are trained on an index multiset into a [`LabeledDataset`], so
//! bootstrap duplicates are weighted by multiplicity without copying data.

use alloc::vec::Vec;

use crate::dataset::{LabeledDataset, TimePrior};
use crate::error::{Error, Result};

mod forest;
mod mlp;
mod tree;

pub use forest::{FeatureSubsample, ForestParams, RandomForest};
pub use mlp::{Mlp, MlpParams};
pub use tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    DecisionTree,
    RandomForest,
    Mlp,
}

/// Model family plus hyperparameters; the untrained half of a model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    DecisionTree(TreeParams),
    RandomForest(ForestParams),
    Mlp(MlpParams),
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::DecisionTree(_) => ModelKind::DecisionTree,
            ModelSpec::RandomForest(_) => ModelKind::RandomForest,
            ModelSpec::Mlp(_) => ModelKind::Mlp,
        }
    }

    /// Trains on the samples at `indices` (duplicates count repeatedly).
    pub fn fit(&self, ds: &LabeledDataset, indices: &[usize], seed: u64) -> Result<ProbabilisticModel> {
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(match self {
            ModelSpec::DecisionTree(p) => {
                ProbabilisticModel::DecisionTree(DecisionTree::fit(ds, indices, p, FeatureSubsample::All, seed))
            }
            ModelSpec::RandomForest(p) => ProbabilisticModel::RandomForest(RandomForest::fit(ds, indices, p, seed)?),
            ModelSpec::Mlp(p) => ProbabilisticModel::Mlp(Mlp::fit(ds, indices, p, seed)),
        })
    }
}

/// A trained scoring function `f(c | x)`.
#[derive(Debug, Clone)]
pub enum ProbabilisticModel {
    DecisionTree(DecisionTree),
    RandomForest(RandomForest),
    Mlp(Mlp),
}

impl ProbabilisticModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ProbabilisticModel::DecisionTree(_) => ModelKind::DecisionTree,
            ProbabilisticModel::RandomForest(_) => ModelKind::RandomForest,
            ProbabilisticModel::Mlp(_) => ModelKind::Mlp,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ProbabilisticModel::DecisionTree(m) => m.dim(),
            ProbabilisticModel::RandomForest(m) => m.dim(),
            ProbabilisticModel::Mlp(m) => m.dim(),
        }
    }

    pub fn n_time_labels(&self) -> usize {
        match self {
            ProbabilisticModel::DecisionTree(m) => m.n_time_labels(),
            ProbabilisticModel::RandomForest(m) => m.n_time_labels(),
            ProbabilisticModel::Mlp(m) => m.n_time_labels(),
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<TimePrior> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let mut out = alloc::vec![0.0; self.n_time_labels()];
        self.predict_into(x, &mut out);
        Ok(TimePrior { probs: out })
    }

    /// Writes `f(· | x)` into `out`; `x` must have the trained dimension.
    pub(crate) fn predict_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            ProbabilisticModel::DecisionTree(m) => out.copy_from_slice(&m.leaf_distribution(x).probs),
            ProbabilisticModel::RandomForest(m) => m.predict_into(x, out),
            ProbabilisticModel::Mlp(m) => m.predict_into(x, out),
        }
    }

    pub fn leaf_id(&self, x: &[f64]) -> Result<usize> {
        match self {
            ProbabilisticModel::DecisionTree(t) => {
                if x.len() != t.dim() {
                    return Err(Error::DimensionMismatch { expected: t.dim(), found: x.len() });
                }
                Ok(t.leaf_id(x))
            }
            _ => Err(Error::NotATree),
        }
    }
}

pub fn train_decision_tree(ds: &LabeledDataset, params: &TreeParams, seed: u64) -> ProbabilisticModel {
    let all: Vec<usize> = (0..ds.len()).collect();
    ProbabilisticModel::DecisionTree(DecisionTree::fit(ds, &all, params, FeatureSubsample::All, seed))
}

pub fn train_random_forest(ds: &LabeledDataset, params: &ForestParams, seed: u64) -> Result<ProbabilisticModel> {
    let all: Vec<usize> = (0..ds.len()).collect();
    Ok(ProbabilisticModel::RandomForest(RandomForest::fit(ds, &all, params, seed)?))
}

pub fn train_mlp(ds: &LabeledDataset, params: &MlpParams, seed: u64) -> ProbabilisticModel {
    let all: Vec<usize> = (0..ds.len()).collect();
    ProbabilisticModel::Mlp(Mlp::fit(ds, &all, params, seed))
}
