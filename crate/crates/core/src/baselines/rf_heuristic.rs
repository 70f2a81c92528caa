use super::LocalTestResult;
use crate::dataset::{time_label_prior, LabeledDataset};
use crate::error::Result;
use crate::models::{ForestParams, RandomForest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RfHeuristicParams {
    pub forest: ForestParams,
}

/// Random-forest heuristic: a sample's score is the total-variation distance
/// between its out-of-bag predicted time distribution and the global prior.
/// Samples that were in-bag for every tree score 0.
pub fn rf_heuristic_localize(ds: &LabeledDataset, params: &RfHeuristicParams, seed: u64) -> Result<LocalTestResult> {
    let all: alloc::vec::Vec<usize> = (0..ds.len()).collect();
    let forest = RandomForest::fit(ds, &all, &params.forest, seed)?;
    let prior = time_label_prior(ds);
    let scores =
        forest.oob_predictions(ds)?.into_iter().map(|p| p.map_or(0.0, |p| p.total_variation(&prior))).collect();
    Ok(LocalTestResult::scores(scores))
}
