use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::bootstrap::select_coverage_maximizing_bootstraps;
use super::pvalue::{median_aggregate, ClassCalibration};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::models::{ModelSpec, TreeParams};
use crate::par::map_indexed;
use crate::rng::{derive_seed, derived_rng, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct CPConfig {
    pub n_boot: usize,
    pub model: ModelSpec,
    pub seed: u64,
    /// Candidate pool size relative to `n_boot` for coverage-maximizing
    /// selection; 1 means plain bootstraps.
    pub bootstrap_pool_factor: usize,
}

impl Default for CPConfig {
    fn default() -> Self {
        Self { n_boot: 100, model: ModelSpec::DecisionTree(TreeParams::default()), seed: 0, bootstrap_pool_factor: 10 }
    }
}

/// Per-sample p-value lists and their medians. `aggregated[i]` is `None`
/// exactly when sample `i` never received a value.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueTable {
    pub per_sample: Vec<Vec<f64>>,
    pub aggregated: Vec<Option<f64>>,
}

impl PValueTable {
    pub fn from_lists(per_sample: Vec<Vec<f64>>) -> Self {
        let aggregated = per_sample.iter().map(|p| median_aggregate(p).ok()).collect();
        Self { per_sample, aggregated }
    }

    pub fn len(&self) -> usize {
        self.aggregated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aggregated.is_empty()
    }

    pub fn n_assigned(&self) -> usize {
        self.aggregated.iter().filter(|p| p.is_some()).count()
    }

    pub fn assigned(&self) -> Vec<bool> {
        self.aggregated.iter().map(Option::is_some).collect()
    }
}

/// Bootstrap conformal drift localization.
///
/// For each selected bootstrap the model is trained on the in-bag multiset,
/// calibrated on the out-of-bag samples, and every distinct in-bag sample gets
/// its min-class p-value appended. Bootstrap `t` trains with a seed derived
/// from `(config.seed, t)`, so the table does not depend on scheduling.
pub fn cp_drift_localization(ds: &LabeledDataset, config: &CPConfig) -> Result<PValueTable> {
    let n = ds.len();
    let splits = select_coverage_maximizing_bootstraps(n, config.n_boot, config.bootstrap_pool_factor, config.seed)?;
    let k = ds.n_time_labels();
    let per_boot = map_indexed(splits.len(), |t| -> Result<Vec<(usize, f64)>> {
        let split = &splits[t];
        let model = config.model.fit(ds, &split.in_bag, derive_seed(config.seed, stream::TRAIN, t as u64))?;
        let cal = ClassCalibration::new(&model, ds, &split.oob);
        let mut probs = alloc::vec![0.0; k];
        Ok(split
            .unique_in_bag()
            .into_iter()
            .map(|i| {
                model.predict_into(ds.features(i), &mut probs);
                (i, cal.min_p_value(&probs))
            })
            .collect())
    });
    let mut lists = alloc::vec![Vec::new(); n];
    for boot in per_boot {
        for (i, p) in boot? {
            lists[i].push(p);
        }
    }
    Ok(PValueTable::from_lists(lists))
}

/// Single train/calibration split: the model is trained on a random
/// `split_fraction` of the samples and calibrated on the rest; only the
/// training samples receive p-values.
pub fn split_conformal_localization(
    ds: &LabeledDataset,
    split_fraction: f64,
    model: &ModelSpec,
    seed: u64,
) -> Result<PValueTable> {
    let n = ds.len();
    if !(split_fraction > 0.0 && split_fraction < 1.0) {
        return Err(Error::InvalidParameter("split fraction must lie in (0, 1)"));
    }
    let n_train = libm::round(split_fraction * n as f64) as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::InvalidParameter("split leaves the training or calibration part empty"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut derived_rng(seed, stream::SPLIT, 0));
    let (train, calib) = order.split_at(n_train);
    let mut train = train.to_vec();
    train.sort_unstable();
    let fitted = model.fit(ds, &train, derive_seed(seed, stream::TRAIN, 0))?;
    let cal = ClassCalibration::new(&fitted, ds, calib);
    let mut lists = alloc::vec![Vec::new(); n];
    let mut probs = alloc::vec![0.0; ds.n_time_labels()];
    for &i in &train {
        fitted.predict_into(ds.features(i), &mut probs);
        lists[i].push(cal.min_p_value(&probs));
    }
    Ok(PValueTable::from_lists(lists))
}
