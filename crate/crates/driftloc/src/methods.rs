//! Method names and hyperparameters shared by the command line and bench
//! config files.

use clap::{Args, ValueEnum};
use driftloc_core::baselines::{KdqParams, LddParams, MbdlParams, RfHeuristicParams};
use driftloc_core::conformal::CPConfig;
use driftloc_core::eval::Method;
use driftloc_core::models::{FeatureSubsample, ForestParams, MlpParams, ModelSpec, TreeParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    CpDt,
    CpMlp,
    SplitCp,
    Mbdl,
    RfHeur,
    Ldd,
    Kdq,
}

impl MethodName {
    pub const ALL: [MethodName; 7] = [
        MethodName::CpDt,
        MethodName::CpMlp,
        MethodName::SplitCp,
        MethodName::Mbdl,
        MethodName::RfHeur,
        MethodName::Ldd,
        MethodName::Kdq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::CpDt => "cp-dt",
            MethodName::CpMlp => "cp-mlp",
            MethodName::SplitCp => "split-cp",
            MethodName::Mbdl => "mbdl",
            MethodName::RfHeur => "rf-heur",
            MethodName::Ldd => "ldd",
            MethodName::Kdq => "kdq",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }

    pub fn list() -> String {
        Self::ALL.map(MethodName::as_str).join(", ")
    }
}

/// Model used by split conformal localization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitModel {
    Dt,
    Mlp,
}

/// Every tunable hyperparameter. Each method reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MethodParams {
    /// Number of bootstraps (cp-dt, cp-mlp, mbdl)
    #[arg(long, default_value_t = MethodParams::default().n_boot)]
    pub n_boot: usize,
    /// Candidate bootstraps per selected one; 1 disables coverage selection
    #[arg(long, default_value_t = MethodParams::default().pool_factor)]
    pub pool_factor: usize,
    /// Decision tree depth limit (cp-dt, split-cp, mbdl)
    #[arg(long, default_value_t = MethodParams::default().max_depth)]
    pub max_depth: usize,
    /// Decision tree minimum samples per leaf
    #[arg(long, default_value_t = MethodParams::default().min_leaf_size)]
    pub min_leaf_size: usize,
    /// MLP hidden layer width
    #[arg(long, default_value_t = MethodParams::default().hidden_units)]
    pub hidden_units: usize,
    /// MLP training epochs
    #[arg(long, default_value_t = MethodParams::default().epochs)]
    pub epochs: usize,
    /// MLP SGD step size
    #[arg(long, default_value_t = MethodParams::default().learning_rate)]
    pub learning_rate: f64,
    /// MLP minibatch size
    #[arg(long, default_value_t = MethodParams::default().batch_size)]
    pub batch_size: usize,
    /// Training fraction for split-cp
    #[arg(long, default_value_t = MethodParams::default().split_fraction)]
    pub split_fraction: f64,
    /// Model for split-cp
    #[arg(long, value_enum, default_value_t = MethodParams::default().split_model)]
    pub split_model: SplitModel,
    /// Label permutations per bootstrap (mbdl)
    #[arg(long, default_value_t = MethodParams::default().n_perm)]
    pub n_perm: usize,
    /// Forest size (rf-heur)
    #[arg(long, default_value_t = MethodParams::default().n_trees)]
    pub n_trees: usize,
    /// Forest tree depth limit
    #[arg(long, default_value_t = MethodParams::default().forest_max_depth)]
    pub forest_max_depth: usize,
    /// Forest tree minimum samples per leaf
    #[arg(long, default_value_t = MethodParams::default().forest_min_leaf_size)]
    pub forest_min_leaf_size: usize,
    /// Neighbourhood size for ldd; defaults to n/5 clamped to [1, 20]
    #[arg(long)]
    pub ldd_k: Option<usize>,
    /// Permutation resamples for the ldd null
    #[arg(long, default_value_t = MethodParams::default().n_resample)]
    pub n_resample: usize,
    /// kdq leaf size
    #[arg(long, default_value_t = MethodParams::default().kdq_min_leaf_size)]
    pub kdq_min_leaf_size: usize,
    /// kdq depth limit
    #[arg(long, default_value_t = MethodParams::default().kdq_max_depth)]
    pub kdq_max_depth: usize,
}

impl Default for MethodParams {
    fn default() -> Self {
        let cp = CPConfig::default();
        let tree = TreeParams::default();
        let mlp = MlpParams::default();
        let forest = ForestParams::default();
        let mbdl = MbdlParams::default();
        let ldd = LddParams::default();
        let kdq = KdqParams::default();
        Self {
            n_boot: cp.n_boot,
            pool_factor: cp.bootstrap_pool_factor,
            max_depth: tree.max_depth,
            min_leaf_size: tree.min_leaf_size,
            hidden_units: mlp.hidden_units,
            epochs: mlp.epochs,
            learning_rate: mlp.learning_rate,
            batch_size: mlp.batch_size,
            split_fraction: 0.5,
            split_model: SplitModel::Dt,
            n_perm: mbdl.n_perm,
            n_trees: forest.n_trees,
            forest_max_depth: forest.tree.max_depth,
            forest_min_leaf_size: forest.tree.min_leaf_size,
            ldd_k: ldd.k,
            n_resample: ldd.n_resample,
            kdq_min_leaf_size: kdq.min_leaf_size,
            kdq_max_depth: kdq.max_depth,
        }
    }
}

impl MethodParams {
    pub fn tree(&self) -> TreeParams {
        TreeParams { max_depth: self.max_depth, min_leaf_size: self.min_leaf_size }
    }

    pub fn mlp(&self) -> MlpParams {
        MlpParams {
            hidden_units: self.hidden_units,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            batch_size: self.batch_size,
        }
    }

    /// Sets one field from its config-file key (snake case, as the long flag
    /// with underscores). Returns `Err` with a message on bad keys or values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        match key {
            "n_boot" => self.n_boot = num(key, value)?,
            "pool_factor" => self.pool_factor = num(key, value)?,
            "max_depth" => self.max_depth = num(key, value)?,
            "min_leaf_size" => self.min_leaf_size = num(key, value)?,
            "hidden_units" => self.hidden_units = num(key, value)?,
            "epochs" => self.epochs = num(key, value)?,
            "learning_rate" => self.learning_rate = num(key, value)?,
            "batch_size" => self.batch_size = num(key, value)?,
            "split_fraction" => self.split_fraction = num(key, value)?,
            "split_model" => {
                self.split_model = SplitModel::from_str(value, false)
                    .map_err(|_| format!("invalid value {value:?} for {key}, expected dt or mlp"))?
            }
            "n_perm" => self.n_perm = num(key, value)?,
            "n_trees" => self.n_trees = num(key, value)?,
            "forest_max_depth" => self.forest_max_depth = num(key, value)?,
            "forest_min_leaf_size" => self.forest_min_leaf_size = num(key, value)?,
            "ldd_k" => self.ldd_k = if value == "auto" { None } else { Some(num(key, value)?) },
            "n_resample" => self.n_resample = num(key, value)?,
            "kdq_min_leaf_size" => self.kdq_min_leaf_size = num(key, value)?,
            "kdq_max_depth" => self.kdq_max_depth = num(key, value)?,
            _ => return Err(format!("unknown parameter {key:?}")),
        }
        Ok(())
    }

    pub fn method(&self, name: MethodName) -> Method {
        match name {
            MethodName::CpDt => Method::Cp {
                n_boot: self.n_boot,
                bootstrap_pool_factor: self.pool_factor,
                model: ModelSpec::DecisionTree(self.tree()),
            },
            MethodName::CpMlp => Method::Cp {
                n_boot: self.n_boot,
                bootstrap_pool_factor: self.pool_factor,
                model: ModelSpec::Mlp(self.mlp()),
            },
            MethodName::SplitCp => Method::SplitCp {
                split_fraction: self.split_fraction,
                model: match self.split_model {
                    SplitModel::Dt => ModelSpec::DecisionTree(self.tree()),
                    SplitModel::Mlp => ModelSpec::Mlp(self.mlp()),
                },
            },
            MethodName::Mbdl => Method::Mbdl(MbdlParams {
                n_boot: self.n_boot,
                n_perm: self.n_perm,
                tree: self.tree(),
                bootstrap_pool_factor: self.pool_factor,
            }),
            MethodName::RfHeur => Method::RfHeuristic(RfHeuristicParams {
                forest: ForestParams {
                    n_trees: self.n_trees,
                    tree: TreeParams { max_depth: self.forest_max_depth, min_leaf_size: self.forest_min_leaf_size },
                    feature_subsample: FeatureSubsample::Sqrt,
                },
            }),
            MethodName::Ldd => Method::Ldd(LddParams { k: self.ldd_k, n_resample: self.n_resample }),
            MethodName::Kdq => {
                Method::Kdq(KdqParams { min_leaf_size: self.kdq_min_leaf_size, max_depth: self.kdq_max_depth })
            }
        }
    }
}
