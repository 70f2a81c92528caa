use alloc::vec::Vec;

use super::experiment::{run_experiment, ExperimentConfig, Method, ResultTable, Summary};
use crate::error::{Error, Result};

/// One grid point of a sweep: median and quartile band across repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub grid_value: f64,
    pub summary: Option<Summary>,
    pub table: ResultTable,
}

fn point(grid_value: f64, table: ResultTable) -> CurvePoint {
    CurvePoint { grid_value, summary: table.summary(), table }
}

/// Re-runs a bootstrap conformal experiment for each `n_boot` in the grid.
/// All grid points share the master seed, hence the same datasets
/// (a paired design).
pub fn bootstrap_sweep(config: &ExperimentConfig, n_boot_grid: &[usize]) -> Result<Vec<CurvePoint>> {
    if n_boot_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let Method::Cp { bootstrap_pool_factor, model, .. } = &config.method else {
        return Err(Error::InvalidParameter("bootstrap sweep needs a bootstrap conformal method"));
    };
    n_boot_grid
        .iter()
        .map(|&n_boot| {
            let cfg = ExperimentConfig {
                method: Method::Cp { n_boot, bootstrap_pool_factor: *bootstrap_pool_factor, model: model.clone() },
                ..config.clone()
            };
            Ok(point(n_boot as f64, run_experiment(&cfg)?))
        })
        .collect()
}

/// Runs split conformal localization for each training fraction in the grid
/// on paired data. A bootstrap conformal method contributes its model.
pub fn split_size_sweep(config: &ExperimentConfig, fraction_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    if fraction_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if fraction_grid.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
        return Err(Error::InvalidParameter("split fractions must lie in (0, 1)"));
    }
    let model = match &config.method {
        Method::SplitCp { model, .. } | Method::Cp { model, .. } => model.clone(),
        _ => return Err(Error::InvalidParameter("split-size sweep needs a conformal method")),
    };
    fraction_grid
        .iter()
        .map(|&split_fraction| {
            let cfg =
                ExperimentConfig { method: Method::SplitCp { split_fraction, model: model.clone() }, ..config.clone() };
            Ok(point(split_fraction, run_experiment(&cfg)?))
        })
        .collect()
}
