//! One-hidden-layer rectifier network with a softmax head, trained by
//! mini-batch gradient descent on cross-entropy.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::dataset::LabeledDataset;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpParams {
    pub hidden_units: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self { hidden_units: 64, epochs: 100, learning_rate: 0.01, batch_size: 32 }
    }
}

/// Trained network. Inputs are standardized with the per-feature mean and
/// scale fitted on the training multiset.
///
/// Parameters live in one flat vector laid out as
/// `[w1 (h×d) | b1 (h) | w2 (k×h) | b2 (k)]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    mean: Vec<f64>,
    scale: Vec<f64>,
    params: Vec<f64>,
    dim: usize,
    hidden: usize,
    n_time_labels: usize,
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = libm::exp(*v - max);
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

impl Mlp {
    /// Randomly initialized network with identity standardization: He-uniform
    /// hidden weights, Glorot-uniform output weights, zero biases.
    pub fn init(dim: usize, hidden: usize, n_time_labels: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let k = n_time_labels;
        let mut params = alloc::vec![0.0; hidden * dim + hidden + k * hidden + k];
        let a1 = libm::sqrt(6.0 / dim.max(1) as f64);
        for w in &mut params[..hidden * dim] {
            *w = rng.random_range(-a1..a1);
        }
        let a2 = libm::sqrt(6.0 / (hidden + k) as f64);
        let off = hidden * dim + hidden;
        for w in &mut params[off..off + k * hidden] {
            *w = rng.random_range(-a2..a2);
        }
        Self { mean: alloc::vec![0.0; dim], scale: alloc::vec![1.0; dim], params, dim, hidden, n_time_labels: k }
    }

    pub fn fit(ds: &LabeledDataset, indices: &[usize], p: &MlpParams, seed: u64) -> Self {
        let d = ds.dim();
        let mut net = Self::init(d, p.hidden_units.max(1), ds.n_time_labels(), seed);
        let n = indices.len() as f64;
        for j in 0..d {
            let mean = indices.iter().map(|&i| ds.features(i)[j]).sum::<f64>() / n;
            let var = indices
                .iter()
                .map(|&i| {
                    let c = ds.features(i)[j] - mean;
                    c * c
                })
                .sum::<f64>()
                / n;
            let sd = libm::sqrt(var);
            net.mean[j] = mean;
            net.scale[j] = if sd > 1e-12 { sd } else { 1.0 };
        }
        let inputs: Vec<Vec<f64>> = indices.iter().map(|&i| net.standardize(ds.features(i))).collect();
        let labels: Vec<usize> = indices.iter().map(|&i| ds.label(i)).collect();

        let mut rng = rng_from_seed(seed ^ 0x005E_ED0F_BA7C);
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        let mut grad = alloc::vec![0.0; net.params.len()];
        let mut scratch = Scratch::new(net.hidden, net.n_time_labels);
        let batch = p.batch_size.max(1);
        for _ in 0..p.epochs {
            order.shuffle(&mut rng);
            for chunk in order.chunks(batch) {
                grad.iter_mut().for_each(|g| *g = 0.0);
                for &r in chunk {
                    net.accumulate(&inputs[r], labels[r], &mut grad, &mut scratch);
                }
                let step = p.learning_rate / chunk.len() as f64;
                for (w, g) in net.params.iter_mut().zip(&grad) {
                    *w -= step * g;
                }
            }
        }
        net
    }

    fn standardize(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(self.mean.iter().zip(&self.scale)).map(|(v, (m, s))| (v - m) / s).collect()
    }

    /// Forward pass on a standardized input; fills `scratch.hidden` and
    /// leaves class probabilities in `scratch.out`.
    fn forward(&self, z: &[f64], scratch: &mut Scratch) {
        let (d, h, k) = (self.dim, self.hidden, self.n_time_labels);
        let (w1, rest) = self.params.split_at(h * d);
        let (b1, rest) = rest.split_at(h);
        let (w2, b2) = rest.split_at(k * h);
        for u in 0..h {
            let row = &w1[u * d..(u + 1) * d];
            let a = b1[u] + row.iter().zip(z).map(|(w, x)| w * x).sum::<f64>();
            scratch.hidden[u] = a.max(0.0);
        }
        for c in 0..k {
            let row = &w2[c * h..(c + 1) * h];
            scratch.out[c] = b2[c] + row.iter().zip(&scratch.hidden).map(|(w, a)| w * a).sum::<f64>();
        }
        softmax_in_place(&mut scratch.out);
    }

    /// Adds the cross-entropy gradient of one standardized example to `grad`
    /// and returns its loss.
    fn accumulate(&self, z: &[f64], label: usize, grad: &mut [f64], scratch: &mut Scratch) -> f64 {
        let (d, h, k) = (self.dim, self.hidden, self.n_time_labels);
        self.forward(z, scratch);
        let loss = -libm::log(scratch.out[label].max(f64::MIN_POSITIVE));
        for c in 0..k {
            scratch.delta_out[c] = scratch.out[c] - if c == label { 1.0 } else { 0.0 };
        }
        let w2_off = h * d + h;
        let b2_off = w2_off + k * h;
        for c in 0..k {
            let dc = scratch.delta_out[c];
            for u in 0..h {
                grad[w2_off + c * h + u] += dc * scratch.hidden[u];
            }
            grad[b2_off + c] += dc;
        }
        for u in 0..h {
            if scratch.hidden[u] <= 0.0 {
                continue;
            }
            let back: f64 = (0..k).map(|c| self.params[w2_off + c * h + u] * scratch.delta_out[c]).sum();
            for j in 0..d {
                grad[u * d + j] += back * z[j];
            }
            grad[h * d + u] += back;
        }
        loss
    }

    /// Mean cross-entropy over already-standardized inputs.
    pub fn loss(&self, inputs: &[Vec<f64>], labels: &[usize]) -> f64 {
        let mut scratch = Scratch::new(self.hidden, self.n_time_labels);
        let total: f64 = inputs
            .iter()
            .zip(labels)
            .map(|(z, &y)| {
                self.forward(z, &mut scratch);
                -libm::log(scratch.out[y].max(f64::MIN_POSITIVE))
            })
            .sum();
        total / inputs.len() as f64
    }

    /// Analytic gradient of [`Mlp::loss`] with respect to [`Mlp::params`].
    pub fn loss_gradient(&self, inputs: &[Vec<f64>], labels: &[usize]) -> Vec<f64> {
        let mut grad = alloc::vec![0.0; self.params.len()];
        let mut scratch = Scratch::new(self.hidden, self.n_time_labels);
        for (z, &y) in inputs.iter().zip(labels) {
            self.accumulate(z, y, &mut grad, &mut scratch);
        }
        let n = inputs.len() as f64;
        grad.iter_mut().for_each(|g| *g /= n);
        grad
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub(crate) fn predict_into(&self, x: &[f64], out: &mut [f64]) {
        let z = self.standardize(x);
        let mut scratch = Scratch::new(self.hidden, self.n_time_labels);
        self.forward(&z, &mut scratch);
        out.copy_from_slice(&scratch.out);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_time_labels(&self) -> usize {
        self.n_time_labels
    }
}

struct Scratch {
    hidden: Vec<f64>,
    out: Vec<f64>,
    delta_out: Vec<f64>,
}

impl Scratch {
    fn new(h: usize, k: usize) -> Self {
        Self { hidden: alloc::vec![0.0; h], out: alloc::vec![0.0; k], delta_out: alloc::vec![0.0; k] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{train_mlp, ProbabilisticModel};
    use alloc::vec;

    fn line(n: usize) -> LabeledDataset {
        let xs = (0..n).map(|i| vec![i as f64 / n as f64 * 10.0 - 5.0]).collect();
        let ys = (0..n).map(|i| usize::from(i >= n / 2)).collect();
        LabeledDataset::from_parts(xs, ys, 2).unwrap()
    }

    fn accuracy(m: &ProbabilisticModel, ds: &LabeledDataset) -> f64 {
        let hits = (0..ds.len())
            .filter(|&i| {
                let p = m.predict_proba(ds.features(i)).unwrap().probs;
                usize::from(p[1] > p[0]) == ds.label(i)
            })
            .count();
        hits as f64 / ds.len() as f64
    }

    #[test]
    fn separable_line_is_learned() {
        let ds = line(100);
        let m = train_mlp(&ds, &MlpParams::default(), 3);
        assert!(accuracy(&m, &ds) >= 0.95);
    }

    #[test]
    fn outputs_are_distributions() {
        let ds = line(20);
        let m = train_mlp(&ds, &MlpParams { epochs: 5, ..Default::default() }, 1);
        for x in [-1e3, -1.0, 0.0, 0.3, 7.0, 1e3] {
            let p = m.predict_proba(&[x]).unwrap().probs;
            assert!(p.iter().all(|&v| v >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn untrained_network_is_at_chance() {
        // Alternating labels along the line: an untrained network has no
        // label information, so accuracy averages out near 1/2 over seeds.
        let xs = (0..40).map(|i| vec![i as f64]).collect();
        let ys = (0..40).map(|i| i % 2).collect();
        let ds = LabeledDataset::from_parts(xs, ys, 2).unwrap();
        let p = MlpParams { epochs: 0, ..Default::default() };
        let accs: Vec<f64> = (0..50).map(|s| accuracy(&train_mlp(&ds, &p, s), &ds)).collect();
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "{mean}");
    }
}
