//! Binomial coefficients, subset enumeration and uniform subset sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

/// Largest `n` for which `C(n, k)` is computed exactly in `u128`
/// (`C(120, 60)` is about 1.2e35, safely inside `u128`).
const EXACT_MAX_N: u64 = 120;

/// `C(n, k)` as an exact integer, for `n <= EXACT_MAX_N`. Out-of-range `k`
/// yields 0.
fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `ln C(n, k)`, via log-gamma. Out-of-range `k` maps to `-inf`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `C(n, k)` as a float; exact for `n <= 120`, log-gamma beyond (may be
/// `inf` for very large arguments, which is fine for budget comparisons).
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_MAX_N {
        binomial_u128(n, k) as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// The ratio `C(a, b) / C(n, k)`, each factor kept in log space until the
/// final exponentiation so that `N = 1000`-scale coefficients never
/// materialize. Returns 0 when `b` is out of range for `a`.
pub fn binomial_ratio(a: u64, b: u64, n: u64, k: u64) -> f64 {
    if b > a {
        return 0.0;
    }
    if a <= EXACT_MAX_N && n <= EXACT_MAX_N {
        return binomial_u128(a, b) as f64 / binomial_u128(n, k) as f64;
    }
    (ln_binomial(a, b) - ln_binomial(n, k)).exp()
}

/// Lexicographic iterator over all `k`-subsets of `0..n`, yielding a
/// reusable slice per step.
pub struct Combinations {
    indices: Vec<usize>,
    n: usize,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            indices: (0..k).collect(),
            n,
            started: false,
            done: k > n,
        }
    }

    /// Advances to the next combination, returning it as a sorted slice.
    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        let k = self.indices.len();
        if k == 0 {
            self.done = true;
            return None;
        }
        // Find the rightmost index that can still move up.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] != i + self.n - k {
                break;
            }
        }
        self.indices[i] += 1;
        for j in i + 1..k {
            self.indices[j] = self.indices[j - 1] + 1;
        }
        Some(&self.indices)
    }
}

/// Independent RNG stream domains, so that distinct estimators sharing a
/// master seed never consume the same random numbers.
#[derive(Debug, Clone, Copy)]
pub enum StreamDomain {
    SubsetSampling = 1,
    FreshDraws = 2,
    BiasedDraws = 3,
    Redundancy = 4,
    PVector = 5,
}

/// A counter-derived RNG for one work item: reproducible for a fixed
/// `(seed, domain, block, item)` no matter how work is scheduled.
pub fn stream_rng(seed: u64, domain: StreamDomain, block: u32, item: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = ((domain as u64) << 56) | ((block as u64) << 32) | item as u64;
    rng.set_stream(stream);
    rng
}

/// Draws a uniformly random `k`-subset of `0..n` by partial Fisher-Yates
/// over `scratch`, which is reset to the identity permutation. The chosen
/// indices are left in `scratch[..k]` (unsorted).
pub fn sample_subset(rng: &mut ChaCha8Rng, scratch: &mut Vec<usize>, n: usize, k: usize) {
    scratch.clear();
    scratch.extend(0..n);
    for i in 0..k {
        let j = rng.random_range(i..n);
        scratch.swap(i, j);
    }
    scratch.truncate(k);
}

/// Neumaier-compensated accumulator; the total is independent of the
/// magnitude ordering pitfalls of naive summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Mean and standard error (sample standard deviation over sqrt(n)) of a
/// batch of values, both accumulated with compensated sums so results do
/// not depend on how the batch was produced in parallel.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n >= 1, "mean of an empty batch");
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    let mean = acc.total() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let mut sq = CompensatedSum::new();
    for &v in values {
        let d = v - mean;
        sq.add(d * d);
    }
    let var = (sq.total() / (n as f64 - 1.0)).max(0.0);
    (mean, (var / n as f64).sqrt())
}
