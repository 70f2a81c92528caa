//! Bootstrap-calibrated conformal p-values for drift localization.
//!
//! A model predicting the time label from the features is trained on the
//! in-bag part of a bootstrap and calibrated on the out-of-bag part. Each
//! in-bag sample receives, for every label `c`, the conformal p-value of its
//! score `f(c | x)` among the out-of-bag scores of samples labelled `c`, and
//! the minimum over labels. A small value means the model is confidently able
//! to exclude some observation time, i.e. the sample is likely drifting.
//! Per-bootstrap values are merged with a median, which rejects at level α
//! exactly when a strict majority of bootstraps do.

mod bootstrap;
mod localize;
mod pvalue;

pub use bootstrap::{min_in_bag_count, sample_bootstrap, select_coverage_maximizing_bootstraps, BootstrapSplit};
pub use localize::{cp_drift_localization, split_conformal_localization, CPConfig, PValueTable};
pub use pvalue::{conformal_p_value, median_aggregate, min_class_p_value, ClassCalibration};
