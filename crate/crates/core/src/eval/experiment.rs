use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng as _;

use super::auc::roc_auc_masked;
use crate::baselines::{
    kdq_tree_localize, ldd_dis_localize, mbdl_permutation_localize, rf_heuristic_localize, KdqParams, LddParams,
    LocalTestResult, MbdlParams, RfHeuristicParams,
};
use crate::conformal::{cp_drift_localization, split_conformal_localization, CPConfig};
use crate::data::{generate_class_swap_stream, generate_no_drift_stream, ClassSwapSpec};
use crate::dataset::{DriftGroundTruth, LabeledDataset};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::par::map_indexed;
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::stats;

/// A localizer with its hyperparameters; the seed comes from the harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Bootstrap conformal localization.
    Cp {
        n_boot: usize,
        bootstrap_pool_factor: usize,
        model: ModelSpec,
    },
    /// Single train/calibration split conformal localization.
    SplitCp {
        split_fraction: f64,
        model: ModelSpec,
    },
    Mbdl(MbdlParams),
    RfHeuristic(RfHeuristicParams),
    Ldd(LddParams),
    Kdq(KdqParams),
    /// Uniform random scores; a null reference.
    RandomScores,
}

/// Runs `method` on one dataset.
pub fn run_method(method: &Method, ds: &LabeledDataset, seed: u64) -> Result<LocalTestResult> {
    match method {
        Method::Cp { n_boot, bootstrap_pool_factor, model } => {
            let config =
                CPConfig { n_boot: *n_boot, model: model.clone(), seed, bootstrap_pool_factor: *bootstrap_pool_factor };
            Ok(LocalTestResult::from_p_values(&cp_drift_localization(ds, &config)?))
        }
        Method::SplitCp { split_fraction, model } => {
            Ok(LocalTestResult::from_p_values(&split_conformal_localization(ds, *split_fraction, model, seed)?))
        }
        Method::Mbdl(p) => mbdl_permutation_localize(ds, p, seed),
        Method::RfHeuristic(p) => rf_heuristic_localize(ds, p, seed),
        Method::Ldd(p) => ldd_dis_localize(ds, p, seed),
        Method::Kdq(p) => kdq_tree_localize(ds, p),
        Method::RandomScores => {
            let mut rng = rng_from_seed(seed);
            Ok(LocalTestResult::scores((0..ds.len()).map(|_| rng.random::<f64>()).collect()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Regenerated per repetition with a derived seed (`spec.seed` ignored).
    ClassSwap(ClassSwapSpec),
    NoDrift {
        n: usize,
        dim: usize,
    },
    /// A fixed dataset; repetitions only vary the method seed.
    Fixed {
        dataset: Arc<LabeledDataset>,
        truth: Arc<DriftGroundTruth>,
    },
}

impl DataSource {
    pub fn generate(&self, seed: u64) -> Result<(LabeledDataset, DriftGroundTruth)> {
        match self {
            DataSource::ClassSwap(spec) => generate_class_swap_stream(&spec.with_seed(seed)),
            DataSource::NoDrift { n, dim } => generate_no_drift_stream(*n, *dim, seed),
            DataSource::Fixed { dataset, truth } => {
                truth.check_len(dataset)?;
                Ok(((**dataset).clone(), (**truth).clone()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    pub data: DataSource,
    pub n_repetitions: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn data_seed(&self, rep: usize) -> u64 {
        derive_seed(self.seed, stream::DATA, rep as u64)
    }

    pub fn method_seed(&self, rep: usize) -> u64 {
        derive_seed(self.seed, stream::METHOD, rep as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepResult {
    pub rep: usize,
    /// `None` when the evaluated samples lack drifting or non-drifting ones.
    pub auc: Option<f64>,
    pub n_evaluated: usize,
    pub n_excluded: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        Some(Self {
            mean: stats::mean(values)?,
            median: stats::median(values)?,
            q25: stats::quantile(values, 0.25)?,
            q75: stats::quantile(values, 0.75)?,
        })
    }
}

/// Per-repetition results, ordered by repetition index.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<RepResult>,
}

impl ResultTable {
    pub fn aucs(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.auc).collect()
    }

    /// Summary over repetitions with a defined AUC.
    pub fn summary(&self) -> Option<Summary> {
        Summary::of(&self.aucs())
    }
}

/// Evaluates one repetition: generate data with the derived data seed, run
/// the method with the derived method seed, score assigned samples.
pub fn run_repetition(config: &ExperimentConfig, rep: usize) -> Result<RepResult> {
    let (ds, truth) = config.data.generate(config.data_seed(rep))?;
    let result = run_method(&config.method, &ds, config.method_seed(rep))?;
    let auc = match roc_auc_masked(&result.values, &truth.is_drifting, result.orientation, Some(&result.assigned)) {
        Ok(a) => Some(a),
        Err(Error::DegenerateTruth) => None,
        Err(e) => return Err(e),
    };
    let n_evaluated = result.n_assigned();
    Ok(RepResult { rep, auc, n_evaluated, n_excluded: ds.len() - n_evaluated })
}

/// Repeats the experiment `n_repetitions` times. Repetitions may run
/// concurrently; the table is identical for any degree of parallelism.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    if config.n_repetitions == 0 {
        return Err(Error::InvalidParameter("n_repetitions must be at least 1"));
    }
    let rows =
        map_indexed(config.n_repetitions, |r| run_repetition(config, r)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ResultTable { rows })
}
