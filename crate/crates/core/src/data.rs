//! Synthetic drift streams.
//!
//! The class-swap stream mimics relabelled image-embedding benchmarks: one
//! class is present in both windows, one only before and one only after the
//! drift. Classes are isotropic Gaussian blobs; `sigma` moves between the
//! well-separated and the hard regime.

use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::dataset::{make_window_pair, DriftGroundTruth, LabeledDataset};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSwapSpec {
    pub n_classes: usize,
    pub samples_per_window: usize,
    pub n_drifting_per_window: usize,
    pub dim: usize,
    pub sigma: f64,
    /// Blob centers are uniform in `[-center_range, center_range]^dim`.
    pub center_range: f64,
    pub seed: u64,
}

impl Default for ClassSwapSpec {
    /// 2×60 samples with 10 drifting, separable blobs in 8 dimensions.
    fn default() -> Self {
        Self {
            n_classes: 10,
            samples_per_window: 60,
            n_drifting_per_window: 5,
            dim: 8,
            sigma: 1.0,
            center_range: 10.0,
            seed: 0,
        }
    }
}

impl ClassSwapSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_classes < 3 {
            return Err(Error::InvalidParameter("class swap needs at least 3 classes"));
        }
        if self.samples_per_window == 0 {
            return Err(Error::EmptyWindow);
        }
        if self.n_drifting_per_window > self.samples_per_window {
            return Err(Error::InvalidParameter("more drifting samples than window size"));
        }
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite() && self.center_range.is_finite()) {
            return Err(Error::InvalidParameter("sigma and center range must be finite, sigma >= 0"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn gaussian_point(rng: &mut Rng, center: &[f64], sigma: f64) -> Vec<f64> {
    center.iter().map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Window 0 holds `samples_per_window − n_drifting` draws of the stable class
/// and `n_drifting` of the before-class, shuffled; window 1 likewise with the
/// after-class. Exactly the before/after draws are marked drifting.
pub fn generate_class_swap_stream(spec: &ClassSwapSpec) -> Result<(LabeledDataset, DriftGroundTruth)> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let centers: Vec<Vec<f64>> = (0..spec.n_classes)
        .map(|_| (0..spec.dim).map(|_| rng.random_range(-spec.center_range..=spec.center_range)).collect())
        .collect();
    let picked = index::sample(&mut rng, spec.n_classes, 3).into_vec();
    let (stable, before, after) = (picked[0], picked[1], picked[2]);

    let mut truth = Vec::with_capacity(2 * spec.samples_per_window);
    let mut windows: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    for (w, drift_class) in [before, after].into_iter().enumerate() {
        let mut plan: Vec<bool> = (0..spec.samples_per_window).map(|j| j < spec.n_drifting_per_window).collect();
        plan.shuffle(&mut rng);
        for drifting in plan {
            let class = if drifting { drift_class } else { stable };
            windows[w].push(gaussian_point(&mut rng, &centers[class], spec.sigma));
            truth.push(drifting);
        }
    }
    let [w0, w1] = windows;
    Ok((make_window_pair(w0, w1)?, DriftGroundTruth::new(truth)))
}

/// `n / 2` standard Gaussian samples per window, nothing drifting.
pub fn generate_no_drift_stream(n: usize, dim: usize, seed: u64) -> Result<(LabeledDataset, DriftGroundTruth)> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidParameter("no-drift stream needs a positive even n"));
    }
    let mut rng = rng_from_seed(seed);
    let zero = alloc::vec![0.0; dim];
    let mut draw = |m: usize| -> Vec<Vec<f64>> { (0..m).map(|_| gaussian_point(&mut rng, &zero, 1.0)).collect() };
    let before = draw(n / 2);
    let after = draw(n / 2);
    Ok((make_window_pair(before, after)?, DriftGroundTruth::none(n)))
}
