//! ROC-AUC scoring, the repeated-experiment harness and the two ablation
//! sweeps.

mod auc;
mod experiment;
mod sweep;

pub use auc::{roc_auc, roc_auc_masked, Orientation};
pub use experiment::{
    run_experiment, run_method, run_repetition, DataSource, ExperimentConfig, Method, RepResult, ResultTable, Summary,
};
pub use sweep::{bootstrap_sweep, split_size_sweep, CurvePoint};
