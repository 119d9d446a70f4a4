//! Averaged mutual information over environment fractions of a given
//! size: exact enumeration over all subsets, seeded uniform subset
//! sampling, the combinatorial closed form for GHZ-plus-junk states, and
//! the non-averaged nested-fraction scenario curves.

use rayon::prelude::*;
use std::f64::consts::LN_2;

use crate::branch::{
    ghz_junk_overlaps, qmi_from_sorted, system_entropy, GhzJunkConfig, OverlapVector,
};
use crate::combinatorics::{
    binomial_f64, binomial_ratio, mean_and_stderr, sample_subset, stream_rng, Combinations,
    CompensatedSum, StreamDomain,
};
use crate::curve::MiCurve;
use crate::entropy::EntropyNats;
use crate::error::{Error, Result};

/// Default cap on the number of subsets an exact enumeration may visit.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// An averaged mutual-information estimate for one fraction size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedQmi {
    pub mi_nats: f64,
    /// 0 for exact (enumerated) values.
    pub stderr: f64,
    /// Subsets visited (the full binomial count when enumerated).
    pub samples: u64,
}

/// Exact mean of `qmi_exact` over all size-`l` subsets, within the default
/// enumeration budget.
pub fn averaged_qmi_enumerated(ov: &OverlapVector, l: usize) -> Result<AveragedQmi> {
    averaged_qmi_enumerated_with_budget(ov, l, DEFAULT_ENUM_BUDGET)
}

/// Exact mean of `qmi_exact` over all size-`l` subsets.
///
/// Fails with [`Error::BudgetExceeded`] when `C(N, l)` exceeds `budget`;
/// callers should fall back to [`averaged_qmi_sampled`].
pub fn averaged_qmi_enumerated_with_budget(
    ov: &OverlapVector,
    l: usize,
    budget: u64,
) -> Result<AveragedQmi> {
    let n = ov.len();
    if l > n {
        return Err(Error::InvalidParameter(format!(
            "fraction size {l} exceeds environment size {n}"
        )));
    }
    let count = binomial_f64(n as u64, l as u64);
    if count > budget as f64 {
        return Err(Error::BudgetExceeded {
            subsets: count,
            budget,
        });
    }
    let mut acc = CompensatedSum::new();
    let mut subsets = Combinations::new(n, l);
    let mut visited: u64 = 0;
    while let Some(subset) = subsets.next_subset() {
        acc.add(qmi_from_sorted(ov, subset));
        visited += 1;
    }
    Ok(AveragedQmi {
        mi_nats: acc.total() / visited as f64,
        stderr: 0.0,
        samples: visited,
    })
}

/// Sample mean and standard error of `qmi_exact` over `n_samples` subsets
/// of size `l`, drawn uniformly. Each sample uses its own counter-derived
/// RNG stream, so the result is bitwise reproducible for a fixed
/// `(seed, n_samples, l)` under any parallel schedule.
pub fn averaged_qmi_sampled(
    ov: &OverlapVector,
    l: usize,
    n_samples: usize,
    seed: u64,
) -> Result<AveragedQmi> {
    let n = ov.len();
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "fraction size {l} outside 1..={n}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter(
            "subset sampling needs at least 2 samples".into(),
        ));
    }
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(scratch, sorted), i| {
                let mut rng = stream_rng(seed, StreamDomain::SubsetSampling, l as u32, i as u32);
                sample_subset(&mut rng, scratch, n, l);
                sorted.clear();
                sorted.extend_from_slice(scratch);
                sorted.sort_unstable();
                qmi_from_sorted(ov, sorted)
            },
        )
        .collect();
    let (mean, stderr) = mean_and_stderr(&values);
    Ok(AveragedQmi {
        mi_nats: mean,
        stderr,
        samples: n_samples as u64,
    })
}

/// Closed-form averaged mutual information for the GHZ-plus-junk state.
///
/// A size-`l` subset falls in one of three classes: junk-only subsets
/// (`C(N-m, l)` of them) carry nothing, subsets containing every
/// correlated qubit (`C(N-m, l-m)`) carry twice the system entropy, and
/// the rest carry it exactly once. Averaging the three weights gives
///
/// `(1 - [C(N-m, l) - C(N-m, l-m)] / C(N, l)) * S(rho_S)`.
///
/// Both binomial ratios are kept in log space and exponentiated
/// separately, so `N = 1000` works without overflow. Out-of-range lower
/// indices contribute 0, and the endpoints come out exactly: 0 at `l = 0`
/// and `2 S(rho_S)` at `l = N`.
pub fn ghz_junk_averaged_closed_form(cfg: GhzJunkConfig, l: usize) -> Result<EntropyNats> {
    let n = cfg.n_total;
    let m = cfg.n_correlated;
    if l > n {
        return Err(Error::InvalidParameter(format!(
            "fraction size {l} exceeds environment size {n}"
        )));
    }
    let s = if m >= 1 { LN_2 } else { 0.0 };
    if l == 0 || m == 0 {
        return Ok(EntropyNats::from_computed(0.0));
    }
    if l == n {
        return Ok(EntropyNats::from_computed(2.0 * s));
    }
    let junk = (n - m) as u64;
    let ratio_junk_only = binomial_ratio(junk, l as u64, n as u64, l as u64);
    let ratio_all_correlated = if l >= m {
        binomial_ratio(junk, (l - m) as u64, n as u64, l as u64)
    } else {
        0.0
    };
    let mi = (1.0 - ratio_junk_only + ratio_all_correlated) * s;
    Ok(EntropyNats::from_computed(mi))
}

/// Which nested-fraction ordering a non-averaged curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Correlated qubits first: every small fraction is maximally
    /// informative.
    A,
    /// Junk qubits first: every fraction below `N - m` is empty-handed.
    B,
    /// One correlated qubit first, junk next, remaining correlated last:
    /// every proper fraction holds at least one correlated qubit and
    /// misses at least one.
    C,
    /// Caller-supplied permutation.
    Explicit,
}

/// A permutation of the environment defining the nested fractions
/// `E_l = {order[0], ..., order[l-1]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOrdering {
    pub kind: ScenarioKind,
    order: Vec<usize>,
}

impl ScenarioOrdering {
    pub fn scenario_a(cfg: GhzJunkConfig) -> Self {
        Self {
            kind: ScenarioKind::A,
            order: (0..cfg.n_total).collect(),
        }
    }

    pub fn scenario_b(cfg: GhzJunkConfig) -> Self {
        let mut order: Vec<usize> = (cfg.n_correlated..cfg.n_total).collect();
        order.extend(0..cfg.n_correlated);
        Self {
            kind: ScenarioKind::B,
            order,
        }
    }

    /// Scenario C needs at least two correlated qubits: one is taken
    /// first, and at least one other stays out of every proper fraction.
    pub fn scenario_c(cfg: GhzJunkConfig) -> Result<Self> {
        if cfg.n_correlated < 2 {
            return Err(Error::InvalidParameter(
                "scenario C needs at least two correlated qubits".into(),
            ));
        }
        let mut order = vec![0usize];
        order.extend(cfg.n_correlated..cfg.n_total);
        order.extend(1..cfg.n_correlated);
        Ok(Self {
            kind: ScenarioKind::C,
            order,
        })
    }

    pub fn explicit(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation { n });
            }
            seen[i] = true;
        }
        Ok(Self {
            kind: ScenarioKind::Explicit,
            order,
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Non-averaged mutual information along one nested sequence of
/// fractions: point `l` uses the first `l` qubits of the ordering.
pub fn scenario_curve(cfg: GhzJunkConfig, ordering: &ScenarioOrdering) -> Result<MiCurve> {
    if ordering.order.len() != cfg.n_total {
        return Err(Error::InvalidPermutation { n: cfg.n_total });
    }
    let ov = ghz_junk_overlaps(cfg);
    let s = system_entropy(&ov).nats();
    let mut curve = MiCurve::new(cfg.n_total, s);
    let mut sorted = Vec::with_capacity(cfg.n_total);
    curve.push(0, 0.0, 0.0, 1);
    for l in 1..=cfg.n_total {
        sorted.clear();
        sorted.extend_from_slice(&ordering.order[..l]);
        sorted.sort_unstable();
        curve.push(l, qmi_from_sorted(&ov, &sorted), 0.0, 1);
    }
    Ok(curve)
}

/// How [`averaged_curve`] computes each interior point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AverageStrategy {
    /// Closed form for GHZ-plus-junk overlaps; otherwise enumeration when
    /// the subset count fits the budget, sampling beyond it.
    Auto { samples: usize, seed: u64 },
    /// Exhaustive enumeration, failing if any point exceeds the budget.
    Enumerate,
    /// Seeded subset sampling for every interior point.
    Sample { samples: usize, seed: u64 },
}

/// Averaged mutual-information curve with one point per fraction size
/// (every `stride`-th size for large environments; `l = 0` and `l = N`
/// are always included and reported exactly).
pub fn averaged_curve(
    ov: &OverlapVector,
    strategy: AverageStrategy,
    stride: usize,
) -> Result<MiCurve> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive".into()));
    }
    let n = ov.len();
    let s = system_entropy(ov).nats();
    let ghz_config = if ov.is_ghz_junk() {
        let m = ov.overlaps().iter().filter(|&&o| o == 0.0).count();
        Some(GhzJunkConfig::new(n, m)?)
    } else {
        None
    };
    let mut curve = MiCurve::new(n, s);
    let mut l = 0usize;
    loop {
        if l == 0 {
            curve.push(0, 0.0, 0.0, 1);
        } else if l == n {
            // Whole pure-state environment: exactly twice the system entropy.
            curve.push(n, 2.0 * s, 0.0, 1);
        } else {
            match strategy {
                AverageStrategy::Auto { samples, seed } => {
                    if let Some(cfg) = ghz_config {
                        let mi = ghz_junk_averaged_closed_form(cfg, l)?;
                        curve.push(l, mi.nats(), 0.0, 1);
                    } else if binomial_f64(n as u64, l as u64) <= DEFAULT_ENUM_BUDGET as f64 {
                        let est = averaged_qmi_enumerated(ov, l)?;
                        curve.push(l, est.mi_nats, 0.0, est.samples);
                    } else {
                        let est = averaged_qmi_sampled(ov, l, samples, seed)?;
                        curve.push(l, est.mi_nats, est.stderr, est.samples);
                    }
                }
                AverageStrategy::Enumerate => {
                    let est = averaged_qmi_enumerated(ov, l)?;
                    curve.push(l, est.mi_nats, 0.0, est.samples);
                }
                AverageStrategy::Sample { samples, seed } => {
                    let est = averaged_qmi_sampled(ov, l, samples, seed)?;
                    curve.push(l, est.mi_nats, est.stderr, est.samples);
                }
            }
        }
        if l == n {
            break;
        }
        l = (l + stride).min(n);
    }
    Ok(curve)
}
