use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{derived_rng, stream, Rng};

/// One bootstrap resample over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapSplit {
    /// `n` draws with replacement, sorted.
    pub in_bag: Vec<usize>,
    /// Indices never drawn, sorted.
    pub oob: Vec<usize>,
}

impl BootstrapSplit {
    /// Builds the split for an explicit draw sequence.
    pub fn from_draws(n: usize, mut draws: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = draws.iter().find(|&&i| i >= n) {
            return Err(Error::LengthMismatch { expected: n, found: bad });
        }
        draws.sort_unstable();
        let mask = mask_of(n, &draws);
        let oob = (0..n).filter(|&i| !mask[i]).collect();
        Ok(Self { in_bag: draws, oob })
    }

    /// Distinct in-bag indices, sorted.
    pub fn unique_in_bag(&self) -> Vec<usize> {
        let mut v = self.in_bag.clone();
        v.dedup();
        v
    }

    pub fn in_bag_mask(&self, n: usize) -> Vec<bool> {
        mask_of(n, &self.in_bag)
    }
}

fn mask_of(n: usize, idx: &[usize]) -> Vec<bool> {
    let mut m = alloc::vec![false; n];
    for &i in idx {
        m[i] = true;
    }
    m
}

/// `n` uniform draws with replacement from `0..n`; the out-of-bag set is the
/// complement. Its expected size tends to `n / e`.
pub fn sample_bootstrap(n: usize, rng: &mut Rng) -> Result<BootstrapSplit> {
    if n < 2 {
        return Err(Error::InvalidParameter("bootstrap needs n >= 2"));
    }
    let draws = (0..n).map(|_| rng.random_range(0..n)).collect();
    BootstrapSplit::from_draws(n, draws)
}

/// Smallest number of splits in which any sample is in-bag.
pub fn min_in_bag_count(splits: &[BootstrapSplit], n: usize) -> usize {
    let mut counts = alloc::vec![0usize; n];
    for s in splits {
        for i in s.unique_in_bag() {
            counts[i] += 1;
        }
    }
    counts.into_iter().min().unwrap_or(0)
}

/// Draws `pool_factor · n_boot` candidate bootstraps (candidate `j` from the
/// stream `(seed, j)`) and greedily keeps `n_boot` of them.
///
/// Each step takes the candidate that maximizes the minimum in-bag count over
/// all samples. Since that minimum stays flat for several steps, ties are
/// broken by the fewest samples sitting at the minimum, then by candidate
/// order. With `pool_factor == 1` the pool is returned as drawn.
pub fn select_coverage_maximizing_bootstraps(
    n: usize,
    n_boot: usize,
    pool_factor: usize,
    seed: u64,
) -> Result<Vec<BootstrapSplit>> {
    if n_boot == 0 {
        return Err(Error::InvalidParameter("n_boot must be at least 1"));
    }
    if pool_factor == 0 {
        return Err(Error::InvalidParameter("bootstrap pool factor must be at least 1"));
    }
    let pool = (0..n_boot * pool_factor)
        .map(|j| sample_bootstrap(n, &mut derived_rng(seed, stream::BOOTSTRAP_POOL, j as u64)))
        .collect::<Result<Vec<_>>>()?;
    if pool_factor == 1 {
        return Ok(pool);
    }
    let masks: Vec<Vec<bool>> = pool.iter().map(|s| s.in_bag_mask(n)).collect();
    let mut taken = alloc::vec![false; pool.len()];
    let mut counts = alloc::vec![0usize; n];
    let mut chosen = Vec::with_capacity(n_boot);
    for _ in 0..n_boot {
        let mut best: Option<(usize, usize, usize)> = None; // (candidate, min, #at-min)
        for (j, mask) in masks.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let mut min = usize::MAX;
            let mut at_min = 0;
            for (c, &m) in counts.iter().zip(mask) {
                let v = c + usize::from(m);
                if v < min {
                    min = v;
                    at_min = 1;
                } else if v == min {
                    at_min += 1;
                }
            }
            let better = match best {
                None => true,
                Some((_, bmin, bat)) => min > bmin || (min == bmin && at_min < bat),
            };
            if better {
                best = Some((j, min, at_min));
            }
        }
        let (j, _, _) = best.expect("pool larger than n_boot");
        taken[j] = true;
        for (c, &m) in counts.iter_mut().zip(&masks[j]) {
            *c += usize::from(m);
        }
        chosen.push(pool[j].clone());
    }
    Ok(chosen)
}
