//! Data model: samples tagged with a finite time label, the drift ground
//! truth and the empirical time-label prior.
//!
//! Sample identity is the position in [`LabeledDataset::samples`]; every
//! downstream table is indexed the same way.
//!
//! Caveat: the localization argument assumes a uniform time prior. With more
//! than two labels and unequal window sizes the min-class p-value is still a
//! valid test, but has not been studied for power.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub time_label: usize,
}

/// An immutable, validated collection of samples over `n_time_labels` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    samples: Vec<Sample>,
    n_time_labels: usize,
    dim: usize,
}

impl LabeledDataset {
    /// Validates and wraps `samples`. Every label in `0..n_time_labels` must
    /// occur, all samples share one dimension and features are finite.
    pub fn new(samples: Vec<Sample>, n_time_labels: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if n_time_labels == 0 {
            return Err(Error::InvalidParameter("n_time_labels must be positive"));
        }
        let dim = samples[0].features.len();
        let mut seen = alloc::vec![false; n_time_labels];
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.features.len() });
            }
            if let Some(j) = s.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { sample: i, feature: j });
            }
            if s.time_label >= n_time_labels {
                return Err(Error::TimeLabelOutOfRange { sample: i, label: s.time_label, n_labels: n_time_labels });
            }
            seen[s.time_label] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::MissingTimeLabel(c));
        }
        Ok(Self { samples, n_time_labels, dim })
    }

    /// Builds a dataset from parallel feature and label vectors.
    pub fn from_parts(features: Vec<Vec<f64>>, labels: Vec<usize>, n_time_labels: usize) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::LengthMismatch { expected: features.len(), found: labels.len() });
        }
        let samples =
            features.into_iter().zip(labels).map(|(features, time_label)| Sample { features, time_label }).collect();
        Self::new(samples, n_time_labels)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_time_labels(&self) -> usize {
        self.n_time_labels
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.samples[i].features
    }

    pub fn label(&self, i: usize) -> usize {
        self.samples[i].time_label
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.time_label).collect()
    }

    /// Number of samples carrying each time label.
    pub fn label_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.n_time_labels];
        for s in &self.samples {
            counts[s.time_label] += 1;
        }
        counts
    }

    /// Same samples with replaced time labels; used by permutation nulls.
    pub fn with_labels(&self, labels: &[usize]) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: labels.len() });
        }
        let samples = self
            .samples
            .iter()
            .zip(labels)
            .map(|(s, &time_label)| Sample { features: s.features.clone(), time_label })
            .collect();
        Self::new(samples, self.n_time_labels)
    }
}

/// Per-sample membership in the drift locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriftGroundTruth {
    pub is_drifting: Vec<bool>,
}

impl DriftGroundTruth {
    pub fn new(is_drifting: Vec<bool>) -> Self {
        Self { is_drifting }
    }

    pub fn none(n: usize) -> Self {
        Self { is_drifting: alloc::vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.is_drifting.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_drifting.is_empty()
    }

    pub fn n_drifting(&self) -> usize {
        self.is_drifting.iter().filter(|&&d| d).count()
    }

    pub fn check_len(&self, ds: &LabeledDataset) -> Result<()> {
        if self.len() != ds.len() {
            return Err(Error::LengthMismatch { expected: ds.len(), found: self.len() });
        }
        Ok(())
    }
}

/// A probability distribution over time labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TimePrior {
    pub probs: Vec<f64>,
}

impl TimePrior {
    /// Wraps `probs`, checking entries lie in [0, 1] and sum to 1 within 1e-9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || libm::fabs(sum - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter("probabilities must be in [0,1] and sum to 1"));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: alloc::vec![1.0 / n as f64; n] }
    }

    /// Laplace-smoothed distribution `(count_c + 1) / (total + |T|)`.
    pub fn smoothed(counts: &[usize]) -> Self {
        let total: usize = counts.iter().sum();
        let denom = (total + counts.len()) as f64;
        Self { probs: counts.iter().map(|&c| (c + 1) as f64 / denom).collect() }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Total-variation distance `½ Σ |p_c − q_c|`.
    pub fn total_variation(&self, other: &TimePrior) -> f64 {
        0.5 * self.probs.iter().zip(&other.probs).map(|(p, q)| libm::fabs(p - q)).sum::<f64>()
    }

    /// Kullback–Leibler divergence `KL(self ‖ other)` in nats.
    pub fn kl_divergence(&self, other: &TimePrior) -> f64 {
        self.probs.iter().zip(&other.probs).filter(|(p, _)| **p > 0.0).map(|(p, q)| p * libm::log(p / q)).sum()
    }
}

/// Two-window dataset: label 0 for `before`, label 1 for `after`, in that order.
pub fn make_window_pair(before: Vec<Vec<f64>>, after: Vec<Vec<f64>>) -> Result<LabeledDataset> {
    if before.is_empty() || after.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let dim = before[0].len();
    if let Some(bad) = before.iter().chain(&after).find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
    }
    let samples = before
        .into_iter()
        .map(|features| Sample { features, time_label: 0 })
        .chain(after.into_iter().map(|features| Sample { features, time_label: 1 }))
        .collect();
    LabeledDataset::new(samples, 2)
}

/// Empirical label frequencies `count(c) / n`.
pub fn time_label_prior(ds: &LabeledDataset) -> TimePrior {
    let n = ds.len() as f64;
    TimePrior { probs: ds.label_counts().into_iter().map(|c| c as f64 / n).collect() }
}
