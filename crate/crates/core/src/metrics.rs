//! Headline objectivity numbers extracted from curves and models:
//! consensus (threshold crossing of an averaged curve), redundancy (exact
//! for GHZ-plus-junk, a greedy packing lower bound for random
//! environments), plateau detection, and the excess-correlation bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::accessible::{accessible_mi_raw, DrawPlan, PDistribution};
use crate::branch::GhzJunkConfig;
use crate::combinatorics::{mean_and_stderr, stream_rng, StreamDomain};
use crate::curve::MiCurve;
use crate::error::{Error, Result};

/// How the redundancy figure in a report was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedundancyKind {
    Exact,
    GreedyLowerBound,
}

/// The JSON report emitted by the experiment commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectivityReport {
    pub model: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    pub threshold: f64,
    pub f0: f64,
    pub consensus: u64,
    pub redundancy: u64,
    pub redundancy_kind: RedundancyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_draws: Option<u64>,
    pub system_entropy_nats: f64,
}

/// Longest run of curve points sitting at the system-entropy plateau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauReport {
    pub present: bool,
    pub start_l: usize,
    pub end_l: usize,
    pub level_normalized: f64,
}

/// Result of a threshold crossing: the smallest qualifying fraction and the
/// consensus it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Smallest fraction size whose value reaches the threshold.
    pub l_star: usize,
    /// `l_star / N`.
    pub f0: f64,
    /// `floor(N / l_star)`: how many disjoint qualifying fractions fit.
    pub consensus: u64,
}

/// Finds the smallest `l` whose `mi_nats` reaches
/// `threshold * system_entropy` (taken from the curve), and the consensus
/// `floor(N / l)`. The `l = 0` point never qualifies.
pub fn consensus_from_curve(curve: &MiCurve, threshold: f64) -> Result<Crossing> {
    if curve.points.is_empty() {
        return Err(Error::InvalidParameter("empty curve".into()));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold {threshold} outside (0, 1]"
        )));
    }
    let s = curve.system_entropy_nats;
    if s.is_nan() || s <= 0.0 {
        return Err(Error::InvalidParameter(
            "system entropy must be positive for a consensus figure".into(),
        ));
    }
    let target = threshold * s;
    for p in &curve.points {
        if p.l >= 1 && p.mi_nats >= target {
            return Ok(Crossing {
                l_star: p.l,
                f0: p.l as f64 / curve.n_env as f64,
                consensus: (curve.n_env / p.l) as u64,
            });
        }
    }
    Err(Error::NoCrossing)
}

/// Redundancy of the GHZ-plus-junk state: each correlated qubit is a full
/// record of the system, so the finest all-informative partition has
/// exactly `m` cells.
pub fn redundancy_ghz_junk(cfg: GhzJunkConfig) -> usize {
    cfg.n_correlated
}

/// Order in which the greedy packer scans the qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Strongest qubits first (the default packing).
    Descending,
    /// Weakest first; a sensitivity check on the packing order.
    Ascending,
    /// The order the values arrive in.
    AsGiven,
}

/// Greedy lower bound on redundancy for a drawn environment: sort qubits
/// by flip probability descending, pack them into the current fraction
/// until its accessible information reaches `threshold * ln 2`, close it,
/// and repeat; the count of closed fractions is returned.
pub fn redundancy_greedy(p: &crate::branch::PVector, threshold: f64) -> usize {
    redundancy_greedy_with_order(p, threshold, GreedyOrder::Descending)
}

/// [`redundancy_greedy`] with an explicit packing order, for checking how
/// sensitive the bound is to that choice.
pub fn redundancy_greedy_with_order(
    p: &crate::branch::PVector,
    threshold: f64,
    order: GreedyOrder,
) -> usize {
    let mut probs = p.probs().to_vec();
    match order {
        GreedyOrder::Descending => probs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap()),
        GreedyOrder::Ascending => probs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap()),
        GreedyOrder::AsGiven => {}
    }
    greedy_count(&probs, threshold)
}

fn greedy_count(sorted: &[f64], threshold: f64) -> usize {
    let target = threshold * LN_2;
    let mut fractions = 0;
    let mut prod = 1.0;
    for &p in sorted {
        prod *= 1.0 - p;
        if accessible_mi_raw(0.5 * prod) >= target {
            fractions += 1;
            prod = 1.0;
        }
    }
    fractions
}

/// Mean and standard error of the greedy redundancy over `plan.n_draws`
/// environments drawn from `dist`.
pub fn redundancy_mean(
    dist: &PDistribution,
    n_env: usize,
    plan: DrawPlan,
    threshold: f64,
) -> Result<(f64, f64)> {
    if n_env == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold {threshold} outside (0, 1]"
        )));
    }
    if let PDistribution::Fixed(v) = dist {
        if v.len() != n_env {
            return Err(Error::InvalidParameter(format!(
                "fixed p-vector has {} entries, expected {n_env}",
                v.len()
            )));
        }
        let count = redundancy_greedy(v, threshold) as f64;
        return Ok((count, 0.0));
    }
    let counts: Vec<f64> = (0..plan.n_draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream_rng(plan.seed, StreamDomain::Redundancy, 0, d as u32);
            let mut probs: Vec<f64> = (0..n_env)
                .map(|_| match dist {
                    PDistribution::Flat => rand::Rng::random::<f64>(&mut rng),
                    PDistribution::Exponential { rate } => {
                        let u: f64 = rand::Rng::random::<f64>(&mut rng);
                        -(1.0 - u * (1.0 - (-rate).exp())).ln() / rate
                    }
                    PDistribution::Fixed(_) => unreachable!(),
                })
                .collect();
            probs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
            greedy_count(&probs, threshold) as f64
        })
        .collect();
    Ok(mean_and_stderr(&counts))
}

/// Finds the longest maximal run of consecutive curve points whose
/// normalized value sits within `level_tol` of 1; the plateau is declared
/// present when the run spans at least two points.
pub fn detect_plateau(curve: &MiCurve, level_tol: f64) -> PlateauReport {
    let mut best: Option<(usize, usize)> = None; // point index range, inclusive
    let mut run_start: Option<usize> = None;
    for (i, p) in curve.points.iter().enumerate() {
        let on_level = (p.mi_normalized - 1.0).abs() <= level_tol;
        match (on_level, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                if best.is_none_or(|(bs, be)| i - 1 - start > be - bs) {
                    best = Some((start, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = run_start {
        let end = curve.points.len() - 1;
        if best.is_none_or(|(bs, be)| end - start > be - bs) {
            best = Some((start, end));
        }
    }
    match best {
        Some((start, end)) => {
            let level: f64 = curve.points[start..=end]
                .iter()
                .map(|p| p.mi_normalized)
                .sum::<f64>()
                / (end - start + 1) as f64;
            PlateauReport {
                present: end > start,
                start_l: curve.points[start].l,
                end_l: curve.points[end].l,
                level_normalized: level,
            }
        }
        None => PlateauReport {
            present: false,
            start_l: 0,
            end_l: 0,
            level_normalized: 0.0,
        },
    }
}

/// Excess of a fraction's mutual information over the system entropy, and
/// the bound it imposes on the rest of the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordExcess {
    /// `mi - S(rho_S)`; positive only in the presence of discord-like
    /// correlations.
    pub delta: f64,
    /// `S(rho_S) - delta`: for a pure global state this is exactly the
    /// complement's mutual information, hence an upper bound on what the
    /// rest of the environment can reveal.
    pub complement_upper_bound: f64,
}

/// `delta = mi - s`; the complementary fraction of a pure state then has
/// mutual information exactly `s - delta`.
pub fn discord_excess_bound(mi_nats: f64, s_system: f64) -> Result<DiscordExcess> {
    if s_system.is_nan() || s_system <= 0.0 {
        return Err(Error::InvalidParameter(
            "system entropy must be positive".into(),
        ));
    }
    let delta = mi_nats - s_system;
    Ok(DiscordExcess {
        delta,
        complement_upper_bound: s_system - delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{ghz_junk_overlaps, qmi_exact, FractionSelection, PVector};
    use crate::fraction::{averaged_curve, AverageStrategy};
    use approx::assert_abs_diff_eq;

    fn ghz_curve(n: usize, m: usize) -> MiCurve {
        let ov = ghz_junk_overlaps(GhzJunkConfig::new(n, m).unwrap());
        averaged_curve(
            &ov,
            AverageStrategy::Auto {
                samples: 10,
                seed: 0,
            },
            1,
        )
        .unwrap()
    }

    #[test]
    fn consensus_fig2_configs() {
        // Enumeration-consistent values: 11 for (1000, 50). The (100, 5)
        // curve crosses 0.99 at l = 49 (the averaged curve of any pure
        // state equals the system entropy exactly at l = N/2), giving
        // consensus 2.
        let c = consensus_from_curve(&ghz_curve(1000, 50), 0.99).unwrap();
        assert_eq!(c.l_star, 86);
        assert_eq!(c.consensus, 11);
        let c = consensus_from_curve(&ghz_curve(100, 5), 0.99).unwrap();
        assert_eq!(c.l_star, 49);
        assert_eq!(c.consensus, 2);
    }

    #[test]
    fn consensus_single_qubit_suffices() {
        let curve = ghz_curve(10, 10); // GHZ: every qubit a full record
        let c = consensus_from_curve(&curve, 0.99).unwrap();
        assert_eq!(c.l_star, 1);
        assert_eq!(c.consensus, 10);
        assert_abs_diff_eq!(c.f0, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn consensus_validates_inputs() {
        let curve = ghz_curve(10, 2);
        assert!(consensus_from_curve(&curve, 0.0).is_err());
        assert!(consensus_from_curve(&curve, 1.5).is_err());
        let mut zero_s = MiCurve::new(4, 0.0);
        zero_s.push(0, 0.0, 0.0, 1);
        assert!(consensus_from_curve(&zero_s, 0.99).is_err());
    }

    #[test]
    fn consensus_monotone_in_threshold() {
        let curve = ghz_curve(200, 12);
        let mut last = u64::MAX;
        for t in [0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 1.0] {
            let c = consensus_from_curve(&curve, t).unwrap().consensus;
            assert!(c <= last, "threshold {t}: consensus {c} > previous {last}");
            last = c;
        }
    }

    #[test]
    fn redundancy_exact_is_m() {
        assert_eq!(
            redundancy_ghz_junk(GhzJunkConfig::new(1000, 50).unwrap()),
            50
        );
        assert_eq!(redundancy_ghz_junk(GhzJunkConfig::new(100, 5).unwrap()), 5);
        assert_eq!(redundancy_ghz_junk(GhzJunkConfig::new(7, 0).unwrap()), 0);
    }

    #[test]
    fn greedy_limits() {
        let all_perfect = PVector::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(redundancy_greedy(&all_perfect, 0.99), 3);
        let all_idle = PVector::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(redundancy_greedy(&all_idle, 0.99), 0);
    }

    #[test]
    fn greedy_monotone_in_threshold_and_permutation_invariant() {
        let p = PVector::new(vec![0.95, 0.2, 0.7, 0.99, 0.4, 0.85, 0.05, 0.6]).unwrap();
        let mut last = usize::MAX;
        for t in [0.5, 0.7, 0.9, 0.99] {
            let r = redundancy_greedy(&p, t);
            assert!(r <= last);
            last = r;
        }
        let mut shuffled = p.probs().to_vec();
        shuffled.reverse();
        shuffled.swap(0, 3);
        let q = PVector::new(shuffled).unwrap();
        assert_eq!(redundancy_greedy(&p, 0.9), redundancy_greedy(&q, 0.9));
    }

    #[test]
    fn greedy_order_sensitivity() {
        // A 0.99-threshold fraction needs sum(-ln(1-p)) of about 6.3 nats;
        // p = 0.999 carries 6.9 on its own.
        let p = PVector::new(vec![0.999, 0.999, 0.01, 0.01]).unwrap();
        assert_eq!(
            redundancy_greedy_with_order(&p, 0.99, GreedyOrder::Descending),
            2
        );
        assert_eq!(
            redundancy_greedy_with_order(&p, 0.99, GreedyOrder::Ascending),
            redundancy_greedy_with_order(
                &PVector::new(vec![0.01, 0.01, 0.999, 0.999]).unwrap(),
                0.99,
                GreedyOrder::AsGiven
            )
        );
        // All orders agree for identical qubits.
        let uniform = PVector::new(vec![0.9; 6]).unwrap();
        let counts: Vec<usize> = [
            GreedyOrder::Descending,
            GreedyOrder::Ascending,
            GreedyOrder::AsGiven,
        ]
        .into_iter()
        .map(|o| redundancy_greedy_with_order(&uniform, 0.99, o))
        .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn consensus_bounded_by_redundancy_on_reference_configs() {
        for (n, m) in [(1000usize, 50usize), (100, 5)] {
            let cfg = GhzJunkConfig::new(n, m).unwrap();
            let c = consensus_from_curve(&ghz_curve(n, m), 0.99)
                .unwrap()
                .consensus;
            assert!(
                c as usize <= redundancy_ghz_junk(cfg),
                "N={n} m={m}: consensus {c} exceeds redundancy {m}"
            );
        }
        let plan = DrawPlan::new(2000, 41).unwrap();
        let curve =
            crate::accessible::averaged_accessible_curve(&PDistribution::Flat, 100, plan).unwrap();
        let c = consensus_from_curve(&curve, 0.99).unwrap().consensus;
        let (red, _) = redundancy_mean(&PDistribution::Flat, 100, plan, 0.99).unwrap();
        assert!(
            (c as f64) <= red,
            "consensus {c} exceeds greedy redundancy {red}"
        );
    }

    #[test]
    fn redundancy_mean_fixed_all_ones() {
        let v = PVector::new(vec![1.0; 9]).unwrap();
        let (mean, stderr) = redundancy_mean(
            &PDistribution::Fixed(v),
            9,
            DrawPlan::new(10, 0).unwrap(),
            0.99,
        )
        .unwrap();
        assert_eq!(mean, 9.0);
        assert_eq!(stderr, 0.0);
    }

    #[test]
    fn plateau_on_scenario_curves() {
        use crate::fraction::{scenario_curve, ScenarioOrdering};
        let cfg = GhzJunkConfig::new(100, 5).unwrap();
        let a = scenario_curve(cfg, &ScenarioOrdering::scenario_a(cfg)).unwrap();
        let report = detect_plateau(&a, 0.01);
        assert!(report.present);
        assert_eq!((report.start_l, report.end_l), (1, 4));
        assert_abs_diff_eq!(report.level_normalized, 1.0, epsilon = 1e-12);

        let c = scenario_curve(cfg, &ScenarioOrdering::scenario_c(cfg).unwrap()).unwrap();
        let report = detect_plateau(&c, 0.01);
        assert!(report.present);
        assert_eq!((report.start_l, report.end_l), (1, 99));
    }

    #[test]
    fn plateau_absent_on_ramp() {
        let mut curve = MiCurve::new(4, 1.0);
        for l in 0..=4usize {
            // Tops out at normalized 0.8, never reaching the level band.
            curve.push(l, 0.2 * l as f64, 0.0, 1);
        }
        let report = detect_plateau(&curve, 0.01);
        assert!(!report.present);
    }

    #[test]
    fn plateau_single_point_not_enough() {
        let mut curve = MiCurve::new(2, 1.0);
        curve.push(0, 0.0, 0.0, 1);
        curve.push(1, 1.0, 0.0, 1);
        curve.push(2, 2.0, 0.0, 1);
        let report = detect_plateau(&curve, 0.01);
        assert!(!report.present);
    }

    #[test]
    fn consensus_at_least_two_implies_plateau_on_fig2_configs() {
        for (n, m) in [(1000usize, 50usize), (100, 5)] {
            let curve = ghz_curve(n, m);
            let c = consensus_from_curve(&curve, 0.99).unwrap();
            if c.consensus >= 2 {
                assert!(detect_plateau(&curve, 0.01).present, "N={n} m={m}");
            }
        }
    }

    #[test]
    fn discord_excess_cases() {
        let s = LN_2;
        let whole = discord_excess_bound(2.0 * s, s).unwrap();
        assert_abs_diff_eq!(whole.delta, s, epsilon = 1e-15);
        assert_abs_diff_eq!(whole.complement_upper_bound, 0.0, epsilon = 1e-15);
        let plateau = discord_excess_bound(s, s).unwrap();
        assert_eq!(plateau.delta, 0.0);
        assert_abs_diff_eq!(plateau.complement_upper_bound, s, epsilon = 1e-15);
        assert!(discord_excess_bound(1.0, 0.0).is_err());
    }

    #[test]
    fn discord_excess_predicts_complement_exactly() {
        // Fraction = all correlated plus one junk qubit.
        let cfg = GhzJunkConfig::new(10, 3).unwrap();
        let ov = ghz_junk_overlaps(cfg);
        let sel: FractionSelection = [0usize, 1, 2, 5].into_iter().collect();
        let mi = qmi_exact(&ov, &sel).unwrap().nats();
        let excess = discord_excess_bound(mi, LN_2).unwrap();
        assert_abs_diff_eq!(excess.delta, LN_2, epsilon = 1e-12);
        let complement = sel.complement(10).unwrap();
        let mi_c = qmi_exact(&ov, &complement).unwrap().nats();
        assert_abs_diff_eq!(excess.complement_upper_bound, mi_c, epsilon = 1e-12);
        assert_abs_diff_eq!(mi_c, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn report_json_shape() {
        let report = ObjectivityReport {
            model: "ghz_junk".into(),
            n: 100,
            m: Some(5),
            distribution: None,
            threshold: 0.99,
            f0: 0.49,
            consensus: 2,
            redundancy: 5,
            redundancy_kind: RedundancyKind::Exact,
            seed: None,
            n_draws: None,
            system_entropy_nats: LN_2,
        };
        let json = serde_json::to_string(&report).unwrap();
        let back: ObjectivityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(json.contains("\"redundancy_kind\":\"exact\""));
    }
}
