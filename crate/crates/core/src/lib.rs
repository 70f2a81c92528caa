//! Sample-level drift localization for two-window (or finite time-label)
//! data streams.
//!
//! The central routine, [`conformal::cp_drift_localization`], trains a
//! probabilistic time-label classifier on bootstrap resamples, calibrates it
//! on the out-of-bag samples and assigns every in-bag sample the minimum
//! class-wise conformal p-value. Per-bootstrap p-values are combined with a
//! median. Baseline localizers, synthetic stream generators and a seeded
//! ROC-AUC experiment harness sit alongside it.
//!
//! The crate is `no_std` (with `alloc`). The default `parallel` feature pulls
//! in `std` and runs bootstraps and repetitions on a rayon pool; results do
//! not depend on the degree of parallelism.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod baselines;
pub mod conformal;
pub mod data;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod models;
mod par;
pub mod rng;
pub mod stats;

pub use dataset::{make_window_pair, time_label_prior, DriftGroundTruth, LabeledDataset, Sample, TimePrior};
pub use error::{Error, Result};
