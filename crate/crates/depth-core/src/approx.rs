//! Configuration and shared samplers for approximate depth computation:
//! random projection directions and uniformly drawn vertex subsets.

use crate::error::{DepthError, Result};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Draw a fixed number k of random subsets.
    Number,
    /// Enumerate a deterministic stratified portion of all subsets.
    Portion,
}

/// Parameters of the approximate engines: k directions (or subsets), the
/// stream seed, and the subset-sampling mode.
#[derive(Debug, Clone, Copy)]
pub struct ApproxConfig {
    pub k: usize,
    pub seed: u64,
    pub mode: SampleMode,
    pub portion: f64,
}

impl ApproxConfig {
    /// k directions with the paper's default count of 1000.
    pub fn new(k: usize, seed: u64) -> Self {
        ApproxConfig {
            k,
            seed,
            mode: SampleMode::Number,
            portion: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(DepthError::data("k must be at least 1"));
        }
        if !(self.portion > 0.0 && self.portion <= 1.0) {
            return Err(DepthError::data("portion must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn rng(&self) -> RandomSource {
        RandomSource::with_stream(self.seed, 0x6465_7074_6873)
    }
}

pub const DEFAULT_DIRECTIONS: usize = 1000;

/// Number of size-k subsets of n items, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((n - i) as u128);
        num /= (i + 1) as u128;
    }
    num
}

/// Visit size-k index subsets of [0, n).  `Number` mode draws `cfg.k`
/// uniform subsets (duplicates rejected within each draw); `Portion` mode
/// walks a deterministic stride through the lexicographic enumeration.
pub fn sample_subsets<F: FnMut(&[usize])>(
    n: usize,
    k: usize,
    cfg: &ApproxConfig,
    mut visit: F,
) -> Result<()> {
    cfg.validate()?;
    if k > n {
        return Err(DepthError::data(format!(
            "cannot draw {k}-subsets from {n} points"
        )));
    }
    match cfg.mode {
        SampleMode::Number => {
            let mut rng = cfg.rng();
            let mut buf = Vec::with_capacity(k);
            for _ in 0..cfg.k {
                rng.distinct_indices(n, k, &mut buf);
                visit(&buf);
            }
        }
        SampleMode::Portion => {
            let total = binomial(n, k);
            let want = ((cfg.portion * total as f64).ceil() as u128).clamp(1, total);
            let mut subset = Vec::with_capacity(k);
            for t in 0..want {
                // Evenly spaced ranks across the full enumeration.
                let rank = if want == total {
                    t
                } else {
                    (t * total) / want
                };
                unrank_combination(n, k, rank, &mut subset);
                visit(&subset);
            }
        }
    }
    Ok(())
}

/// Combination at `rank` in lexicographic order (combinatorial number system).
fn unrank_combination(n: usize, k: usize, mut rank: u128, out: &mut Vec<usize>) {
    out.clear();
    let mut next = 0usize;
    let mut remaining = k;
    while remaining > 0 {
        let without = binomial(n - next - 1, remaining - 1);
        if rank < without {
            out.push(next);
            remaining -= 1;
        } else {
            rank -= without;
        }
        next += 1;
    }
}
