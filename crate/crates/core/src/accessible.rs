//! Computational-basis classical mutual information for the
//! imperfect-CNOT environment: for a fraction with flip probabilities
//! `p_i`, the joint measurement distribution has three outcome classes
//! with probabilities `{1/2, P, 1/2 - P}` where `P = (1/2) prod (1-p_i)`,
//! giving the closed form
//!
//! `I_acc = (1/2) ln 2 + P ln P - (1/2 + P) ln(1/2 + P)`.
//!
//! Curves average this over fresh draws of the `p_i` from a chosen
//! distribution, matching the fresh-extraction procedure the reports use.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::LN_2;

use crate::branch::{FractionSelection, PVector};
use crate::combinatorics::{mean_and_stderr, stream_rng, StreamDomain};
use crate::curve::MiCurve;
use crate::entropy::{xlnx, EntropyNats, Probability, CLAMP_TOL};
use crate::error::{Error, Result};
use rand::Rng;

/// Distribution the per-qubit flip probabilities are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum PDistribution {
    /// Uniform on `[0, 1]`.
    Flat,
    /// Exponential truncated to `[0, 1]`: density proportional to
    /// `exp(-rate p)`, renormalized.
    Exponential { rate: f64 },
    /// A fixed environment; "draws" are uniform subsets of it.
    Fixed(PVector),
}

impl PDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential rate must be positive, got {rate}"
            )));
        }
        Ok(Self::Exponential { rate })
    }

    /// A stable label for provenance records.
    pub fn label(&self) -> String {
        match self {
            Self::Flat => "flat".into(),
            Self::Exponential { rate } => format!("exponential(rate={rate})"),
            Self::Fixed(_) => "fixed".into(),
        }
    }
}

/// How many fresh extractions to average over, and the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawPlan {
    pub n_draws: usize,
    pub seed: u64,
}

impl DrawPlan {
    pub const DEFAULT_DRAWS: usize = 10_000;

    pub fn new(n_draws: usize, seed: u64) -> Result<Self> {
        if n_draws == 0 {
            return Err(Error::InvalidParameter("need at least one draw".into()));
        }
        Ok(Self { n_draws, seed })
    }
}

/// `P = (1/2) prod_{i in sel} (1 - p_i)`: the probability of reading the
/// system in `1` while the fraction still shows the all-zero record.
pub fn p_half_product(p: &PVector, sel: &FractionSelection) -> Result<Probability> {
    sel.validate(p.len())?;
    let prod: f64 = sel.indices().iter().map(|&i| 1.0 - p.probs()[i]).product();
    Probability::new(0.5 * prod)
}

#[inline]
pub(crate) fn accessible_mi_raw(p_half: f64) -> f64 {
    let mi = 0.5 * LN_2 - xlnx(p_half) + xlnx(0.5 + p_half);
    if mi < 0.0 {
        0.0
    } else {
        mi
    }
}

/// Scalar form of the accessible information, from the joint-outcome
/// probability `P` in `[0, 1/2]`.
pub fn accessible_mi_from_p_half(p_half: Probability) -> Result<EntropyNats> {
    if p_half.value() > 0.5 + CLAMP_TOL {
        return Err(Error::InvalidParameter(format!(
            "outcome probability {} exceeds 1/2",
            p_half.value()
        )));
    }
    Ok(EntropyNats::from_computed(accessible_mi_raw(
        p_half.value().min(0.5),
    )))
}

/// Classical mutual information, in nats, between computational-basis
/// readouts of the system and of the selected fraction.
pub fn accessible_mi(p: &PVector, sel: &FractionSelection) -> Result<EntropyNats> {
    let p_half = p_half_product(p, sel)?;
    accessible_mi_from_p_half(p_half)
}

fn sample_one(dist: &PDistribution, rng: &mut ChaCha8Rng) -> f64 {
    match dist {
        PDistribution::Flat => rng.random::<f64>(),
        PDistribution::Exponential { rate } => {
            // Inverse CDF of the truncated density.
            let u: f64 = rng.random();
            -(1.0 - u * (1.0 - (-rate).exp())).ln() / rate
        }
        PDistribution::Fixed(_) => unreachable!("fixed draws go through sample_fixed_subset"),
    }
}

/// For the fixed kind, a "draw of l values" is a uniform size-`l` subset
/// of the fixed environment, which makes the averaged curve the
/// fixed-environment subset average.
fn draw_products(dist: &PDistribution, l: usize, rng: &mut ChaCha8Rng) -> f64 {
    match dist {
        PDistribution::Fixed(v) => {
            let n = v.len();
            let mut remaining = l;
            let mut prod = 1.0;
            for (k, &p) in v.probs().iter().enumerate() {
                if remaining == 0 {
                    break;
                }
                let left = n - k;
                if rng.random_range(0..left) < remaining {
                    prod *= 1.0 - p;
                    remaining -= 1;
                }
            }
            prod
        }
        _ => {
            let mut prod = 1.0;
            for _ in 0..l {
                prod *= 1.0 - sample_one(dist, rng);
            }
            prod
        }
    }
}

/// Draws an environment of `n` flip probabilities. Deterministic per seed;
/// the fixed kind returns its values verbatim (and requires `n` to match).
pub fn draw_pvector(dist: &PDistribution, n: usize, seed: u64) -> Result<PVector> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    match dist {
        PDistribution::Fixed(v) => {
            if v.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "fixed p-vector has {} entries, expected {n}",
                    v.len()
                )));
            }
            Ok(v.clone())
        }
        _ => {
            let mut rng = stream_rng(seed, StreamDomain::PVector, 0, 0);
            PVector::new((0..n).map(|_| sample_one(dist, &mut rng)).collect())
        }
    }
}

/// Averaged accessible-information curve: for each fraction size `l`, the
/// mean and standard error of the accessible information over
/// `plan.n_draws` fresh draws of `l` flip probabilities. The `l = 0` point
/// is 0. Normalization is by `ln 2`, the entropy of the system readout.
pub fn averaged_accessible_curve(
    dist: &PDistribution,
    n_env: usize,
    plan: DrawPlan,
) -> Result<MiCurve> {
    if n_env == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if let PDistribution::Fixed(v) = dist {
        if v.len() != n_env {
            return Err(Error::InvalidParameter(format!(
                "fixed p-vector has {} entries, expected {n_env}",
                v.len()
            )));
        }
    }
    let mut curve = MiCurve::new(n_env, LN_2);
    curve.push(0, 0.0, 0.0, 1);
    for l in 1..=n_env {
        let values: Vec<f64> = (0..plan.n_draws)
            .into_par_iter()
            .map(|d| {
                let mut rng = stream_rng(plan.seed, StreamDomain::FreshDraws, l as u32, d as u32);
                accessible_mi_raw(0.5 * draw_products(dist, l, &mut rng))
            })
            .collect();
        let (mean, stderr) = mean_and_stderr(&values);
        curve.push(l, mean, stderr, plan.n_draws as u64);
    }
    Ok(curve)
}

/// Which tail of the sorted flip probabilities a biased curve keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasMode {
    /// The `l` largest values: the most correlated qubits.
    Max,
    /// The `l` smallest values.
    Min,
}

/// Biased accessible-information curve: per draw, a full environment of
/// `n_env` values is drawn and sorted, and point `l` uses the `l` largest
/// (or smallest) of them; the curve averages over draws.
pub fn biased_accessible_curve(
    dist: &PDistribution,
    n_env: usize,
    plan: DrawPlan,
    mode: BiasMode,
) -> Result<MiCurve> {
    if n_env == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if let PDistribution::Fixed(v) = dist {
        if v.len() != n_env {
            return Err(Error::InvalidParameter(format!(
                "fixed p-vector has {} entries, expected {n_env}",
                v.len()
            )));
        }
    }
    // One vector of accessible informations (indexed by l-1) per draw.
    let per_draw: Vec<Vec<f64>> = (0..plan.n_draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream_rng(plan.seed, StreamDomain::BiasedDraws, 0, d as u32);
            let mut ps: Vec<f64> = match dist {
                PDistribution::Fixed(v) => v.probs().to_vec(),
                _ => (0..n_env).map(|_| sample_one(dist, &mut rng)).collect(),
            };
            ps.sort_unstable_by(|a, b| match mode {
                BiasMode::Max => b.partial_cmp(a).unwrap(),
                BiasMode::Min => a.partial_cmp(b).unwrap(),
            });
            let mut prod = 1.0;
            ps.iter()
                .map(|&p| {
                    prod *= 1.0 - p;
                    accessible_mi_raw(0.5 * prod)
                })
                .collect()
        })
        .collect();
    let mut curve = MiCurve::new(n_env, LN_2);
    curve.push(0, 0.0, 0.0, 1);
    let mut column = vec![0.0; plan.n_draws];
    for l in 1..=n_env {
        for (d, draw) in per_draw.iter().enumerate() {
            column[d] = draw[l - 1];
        }
        let (mean, stderr) = mean_and_stderr(&column);
        curve.push(l, mean, stderr, plan.n_draws as u64);
    }
    Ok(curve)
}
