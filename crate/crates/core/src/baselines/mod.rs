//! Comparison localizers built on local testing: kdq-tree partitions,
//! k-nearest-neighbour drift degree (LDD-DIS), model-based leaf entropy with
//! permutation calibration (MB-DL), and a random-forest heuristic.
//!
//! Each compares a local estimate of the time-label distribution with the
//! global one; they differ in how groups are formed and how the discrepancy is
//! normalized.

use alloc::vec::Vec;

use crate::conformal::PValueTable;
use crate::eval::Orientation;

mod kdq;
mod ldd;
mod mbdl;
mod rf_heuristic;

pub use kdq::{kdq_tree_localize, KdqParams};
pub use ldd::{ldd_dis_localize, local_drift_degree, LddParams};
pub use mbdl::{leaf_entropy, mbdl_permutation_localize, MbdlParams};
pub use rf_heuristic::{rf_heuristic_localize, RfHeuristicParams};

/// One value per sample plus its orientation. Samples with `assigned[i] ==
/// false` carry a neutral placeholder and are excluded from evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTestResult {
    pub values: Vec<f64>,
    pub orientation: Orientation,
    pub assigned: Vec<bool>,
}

impl LocalTestResult {
    pub fn scores(values: Vec<f64>) -> Self {
        let assigned = alloc::vec![true; values.len()];
        Self { values, orientation: Orientation::Score, assigned }
    }

    /// p-values from a table; unassigned samples get 1.
    pub fn from_p_values(table: &PValueTable) -> Self {
        Self {
            values: table.aggregated.iter().map(|p| p.unwrap_or(1.0)).collect(),
            orientation: Orientation::PValue,
            assigned: table.assigned(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_assigned(&self) -> usize {
        self.assigned.iter().filter(|&&a| a).count()
    }
}
