use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Direction of a per-sample value: scores rank drifting samples high,
/// p-values rank them low.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Score,
    PValue,
}

/// ROC-AUC of `values` against `truth`: the probability that a random
/// drifting sample outranks a random non-drifting one, ties counting ½.
/// p-values are ranked by `−p`, an exact order reversal.
pub fn roc_auc(values: &[f64], truth: &[bool], orientation: Orientation) -> Result<f64> {
    roc_auc_masked(values, truth, orientation, None)
}

/// [`roc_auc`] restricted to the samples with `mask[i] == true`.
pub fn roc_auc_masked(values: &[f64], truth: &[bool], orientation: Orientation, mask: Option<&[bool]>) -> Result<f64> {
    if values.len() != truth.len() {
        return Err(Error::LengthMismatch { expected: truth.len(), found: values.len() });
    }
    if let Some(m) = mask {
        if m.len() != truth.len() {
            return Err(Error::LengthMismatch { expected: truth.len(), found: m.len() });
        }
    }
    let mut pairs: Vec<(f64, bool)> = values
        .iter()
        .zip(truth)
        .enumerate()
        .filter(|(i, _)| mask.is_none_or(|m| m[*i]))
        .map(|(_, (&v, &t))| (if orientation == Orientation::PValue { -v } else { v }, t))
        .collect();
    let n_pos = pairs.iter().filter(|p| p.1).count() as u64;
    let n_neg = pairs.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateTruth);
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    // Twice the Mann–Whitney U, kept in integers so the result is exact.
    let mut twice_u: u64 = 0;
    let mut neg_below: u64 = 0;
    let mut g = 0;
    while g < pairs.len() {
        let mut end = g;
        while end < pairs.len() && pairs[end].0 == pairs[g].0 {
            end += 1;
        }
        let pos = pairs[g..end].iter().filter(|p| p.1).count() as u64;
        let neg = (end - g) as u64 - pos;
        twice_u += 2 * pos * neg_below + pos * neg;
        neg_below += neg;
        g = end;
    }
    Ok(twice_u as f64 / (2 * n_pos * n_neg) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        let truth = [true, false, true, false];
        assert_eq!(roc_auc(&[0.9, 0.8, 0.7, 0.1], &truth, Orientation::Score), Ok(0.75));
        assert_eq!(roc_auc(&[0.9, 0.1, 0.8, 0.2], &truth, Orientation::Score), Ok(1.0));
        assert_eq!(roc_auc(&[0.4; 4], &truth, Orientation::Score), Ok(0.5));
        assert_eq!(roc_auc(&[0.01, 0.5, 0.02, 0.9], &truth, Orientation::PValue), Ok(1.0));
    }

    #[test]
    fn degenerate_truth() {
        assert_eq!(roc_auc(&[0.1, 0.2], &[true, true], Orientation::Score), Err(Error::DegenerateTruth));
        let mask = [true, false, true, true];
        assert_eq!(
            roc_auc_masked(&[0.1, 0.2, 0.3, 0.4], &[false, true, false, false], Orientation::Score, Some(&mask)),
            Err(Error::DegenerateTruth)
        );
    }
}
