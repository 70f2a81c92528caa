use alloc::vec::Vec;

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::models::ProbabilisticModel;

/// `(1 + #{s ∈ calibration : s ≤ test}) / (1 + |calibration|)`.
///
/// An empty calibration set gives 1.
pub fn conformal_p_value(calibration_scores: &[f64], test_score: f64) -> f64 {
    let le = calibration_scores.iter().filter(|&&s| s <= test_score).count();
    ratio(le, calibration_scores.len())
}

fn ratio(le: usize, m: usize) -> f64 {
    ((1 + le) as f64 / (1 + m) as f64).clamp(0.0, 1.0)
}

/// Per-label sorted calibration scores `f(c | x_k)` over calibration samples
/// with `y_k = c`.
#[derive(Debug, Clone)]
pub struct ClassCalibration {
    scores: Vec<Vec<f64>>,
}

impl ClassCalibration {
    pub fn new(model: &ProbabilisticModel, ds: &LabeledDataset, calibration: &[usize]) -> Self {
        let k = ds.n_time_labels();
        let mut scores = alloc::vec![Vec::new(); k];
        let mut probs = alloc::vec![0.0; k];
        for &i in calibration {
            model.predict_into(ds.features(i), &mut probs);
            let c = ds.label(i);
            scores[c].push(probs[c]);
        }
        for s in &mut scores {
            s.sort_unstable_by(f64::total_cmp);
        }
        Self { scores }
    }

    /// Builds from explicit per-label score lists.
    pub fn from_scores(mut scores: Vec<Vec<f64>>) -> Self {
        for s in &mut scores {
            s.sort_unstable_by(f64::total_cmp);
        }
        Self { scores }
    }

    pub fn n_labels(&self) -> usize {
        self.scores.len()
    }

    pub fn calibration_size(&self, label: usize) -> usize {
        self.scores[label].len()
    }

    /// Conformal p-value of `score` for `label`; equals
    /// [`conformal_p_value`] on that label's calibration scores.
    pub fn p_value(&self, label: usize, score: f64) -> f64 {
        let cal = &self.scores[label];
        ratio(cal.partition_point(|&s| s <= score), cal.len())
    }

    /// `min_c p_c` for a vector of class scores `f(· | x)`.
    pub fn min_p_value(&self, class_scores: &[f64]) -> f64 {
        class_scores.iter().enumerate().map(|(c, &s)| self.p_value(c, s)).fold(1.0, f64::min)
    }
}

/// Minimum over time labels of the conformal p-value of `x`, calibrated on
/// the samples at `oob`.
pub fn min_class_p_value(model: &ProbabilisticModel, ds: &LabeledDataset, oob: &[usize], x: &[f64]) -> Result<f64> {
    let scores = model.predict_proba(x)?;
    Ok(ClassCalibration::new(model, ds, oob).min_p_value(&scores.probs))
}

/// Median of per-bootstrap p-values. Even-length lists take the upper of the
/// two middle values, so that `median < α` holds exactly when a strict
/// majority of the entries is below α.
pub fn median_aggregate(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v[v.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_evaluated_p_values() {
        assert_eq!(conformal_p_value(&[], 0.3), 1.0);
        assert_eq!(conformal_p_value(&[0.2, 0.5, 0.9], 0.1), 0.25);
        assert_eq!(conformal_p_value(&[0.2, 0.5, 0.9], 0.9), 1.0);
        assert_eq!(conformal_p_value(&[0.2, 0.5, 0.9], 0.5), 0.75);
    }

    #[test]
    fn sorted_lookup_matches_linear_count() {
        let cal = ClassCalibration::from_scores(vec![vec![0.9, 0.2, 0.5, 0.5], vec![]]);
        for s in [0.0, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0] {
            assert_eq!(cal.p_value(0, s), conformal_p_value(&[0.9, 0.2, 0.5, 0.5], s));
            assert_eq!(cal.p_value(1, s), 1.0);
        }
    }

    #[test]
    fn median_examples() {
        assert_eq!(median_aggregate(&[0.3]), Ok(0.3));
        assert_eq!(median_aggregate(&[0.2, 0.8, 0.4]), Ok(0.4));
        assert_eq!(median_aggregate(&[0.2, 0.8]), Ok(0.8));
        assert_eq!(median_aggregate(&[]), Err(Error::EmptyInput));
    }
}
