//! Property tests for the module invariants: symmetries, monotonicities,
//! ranges, and the pure-state complement identities.

use proptest::collection::vec;
use proptest::prelude::*;
use std::f64::consts::LN_2;

use qdarwin_core::{
    accessible_mi, averaged_qmi_enumerated, binary_entropy, ghz_junk_averaged_closed_form,
    ghz_junk_overlaps, icnot_overlaps, qmi_exact, redundancy_greedy, system_entropy,
    FractionSelection, GhzJunkConfig, OverlapVector, PVector, Probability,
};

fn prob() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

proptest! {
    #[test]
    fn binary_entropy_symmetric(x in prob()) {
        let a = binary_entropy(Probability::new(x).unwrap()).nats();
        let b = binary_entropy(Probability::new(1.0 - x).unwrap()).nats();
        prop_assert!((a - b).abs() <= 1e-15);
        prop_assert!((0.0..=LN_2 + 1e-15).contains(&a));
    }

    #[test]
    fn binary_entropy_concave(x in prob(), y in prob()) {
        let h = |v: f64| binary_entropy(Probability::new(v).unwrap()).nats();
        prop_assert!(h((x + y) / 2.0) + 1e-12 >= (h(x) + h(y)) / 2.0);
    }

    #[test]
    fn qmi_monotone_under_subset_growth(
        overlaps in vec(prob(), 2..12),
        selector in vec(0u8..3, 2..12),
    ) {
        let n = overlaps.len();
        let ov = OverlapVector::new(overlaps).unwrap();
        // selector assigns each qubit to: 0 = outside, 1 = in the smaller
        // subset (and therefore the larger), 2 = only in the larger.
        let small: Vec<usize> = (0..n).filter(|&i| selector.get(i) == Some(&1)).collect();
        let large: Vec<usize> = (0..n)
            .filter(|&i| matches!(selector.get(i), Some(&1) | Some(&2)))
            .collect();
        let small = FractionSelection::new(small).unwrap();
        let large = FractionSelection::new(large).unwrap();
        let a = qmi_exact(&ov, &small).unwrap().nats();
        let b = qmi_exact(&ov, &large).unwrap().nats();
        prop_assert!(a <= b + 1e-12, "I(small)={a} > I(large)={b}");
    }

    #[test]
    fn qmi_bounded_by_twice_system_entropy(
        overlaps in vec(prob(), 1..12),
        bits in vec(any::<bool>(), 1..12),
    ) {
        let n = overlaps.len();
        let ov = OverlapVector::new(overlaps).unwrap();
        let sel = FractionSelection::new(
            (0..n).filter(|&i| bits.get(i).copied().unwrap_or(false)).collect(),
        )
        .unwrap();
        let s = system_entropy(&ov).nats();
        let mi = qmi_exact(&ov, &sel).unwrap().nats();
        prop_assert!(mi >= -1e-15);
        prop_assert!(mi <= 2.0 * s + 1e-12);
    }

    #[test]
    fn complement_identity_closed_form(
        overlaps in vec(prob(), 1..24),
        bits in vec(any::<bool>(), 1..24),
    ) {
        let n = overlaps.len();
        let ov = OverlapVector::new(overlaps).unwrap();
        let sel = FractionSelection::new(
            (0..n).filter(|&i| bits.get(i).copied().unwrap_or(false)).collect(),
        )
        .unwrap();
        let complement = sel.complement(n).unwrap();
        let s = system_entropy(&ov).nats();
        let a = qmi_exact(&ov, &sel).unwrap().nats();
        let b = qmi_exact(&ov, &complement).unwrap().nats();
        prop_assert!((a + b - 2.0 * s).abs() <= 1e-12);
    }

    #[test]
    fn averaged_curve_antisymmetric_and_monotone(overlaps in vec(prob(), 1..8)) {
        let n = overlaps.len();
        let ov = OverlapVector::new(overlaps).unwrap();
        let s = system_entropy(&ov).nats();
        let means: Vec<f64> = (0..=n)
            .map(|l| averaged_qmi_enumerated(&ov, l).unwrap().mi_nats)
            .collect();
        for l in 0..=n {
            prop_assert!((means[l] + means[n - l] - 2.0 * s).abs() <= 1e-12);
        }
        for w in means.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn closed_form_equals_enumeration(n in 1usize..=10, m_frac in prob(), l_frac in prob()) {
        let m = ((n as f64 + 0.999) * m_frac) as usize;
        let m = m.min(n);
        let l = ((n as f64 + 0.999) * l_frac) as usize;
        let l = l.min(n);
        let cfg = GhzJunkConfig::new(n, m).unwrap();
        let ov = ghz_junk_overlaps(cfg);
        let closed = ghz_junk_averaged_closed_form(cfg, l).unwrap().nats();
        let exact = averaged_qmi_enumerated(&ov, l).unwrap().mi_nats;
        prop_assert!((closed - exact).abs() <= 1e-12, "N={n} m={m} l={l}: {closed} vs {exact}");
    }

    #[test]
    fn junk_extension_changes_nothing(
        overlaps in vec(prob(), 1..10),
        bits in vec(any::<bool>(), 1..10),
    ) {
        let n = overlaps.len();
        let ov = OverlapVector::new(overlaps.clone()).unwrap();
        let mut extended = overlaps;
        extended.push(1.0);
        let extended = OverlapVector::new(extended).unwrap();
        let subset: Vec<usize> =
            (0..n).filter(|&i| bits.get(i).copied().unwrap_or(false)).collect();
        let sel = FractionSelection::new(subset.clone()).unwrap();
        let mut with_junk = subset;
        with_junk.push(n);
        let with_junk = FractionSelection::new(with_junk).unwrap();
        let base = qmi_exact(&ov, &sel).unwrap().nats();
        prop_assert!((qmi_exact(&extended, &sel).unwrap().nats() - base).abs() <= 1e-15);
        prop_assert!((qmi_exact(&extended, &with_junk).unwrap().nats() - base).abs() <= 1e-15);
    }

    #[test]
    fn accessible_below_qmi_and_monotone(
        probs in vec(prob(), 1..12),
        bits in vec(any::<bool>(), 1..12),
        extra in 0usize..12,
    ) {
        let n = probs.len();
        let p = PVector::new(probs).unwrap();
        let ov = icnot_overlaps(&p);
        let subset: Vec<usize> =
            (0..n).filter(|&i| bits.get(i).copied().unwrap_or(false)).collect();
        let sel = FractionSelection::new(subset.clone()).unwrap();
        let acc = accessible_mi(&p, &sel).unwrap().nats();
        prop_assert!(acc <= qmi_exact(&ov, &sel).unwrap().nats() + 1e-9);
        prop_assert!(acc <= LN_2 + 1e-15);
        // Adding a qubit never loses information.
        let extra = extra % n;
        if !sel.contains(extra) {
            let mut grown = subset;
            grown.push(extra);
            let grown = FractionSelection::new(grown).unwrap();
            prop_assert!(accessible_mi(&p, &grown).unwrap().nats() >= acc - 1e-15);
        }
    }

    #[test]
    fn greedy_redundancy_invariances(
        probs in vec(prob(), 1..40),
        rotate in 0usize..40,
    ) {
        let p = PVector::new(probs.clone()).unwrap();
        let r_99 = redundancy_greedy(&p, 0.99);
        let r_90 = redundancy_greedy(&p, 0.90);
        prop_assert!(r_99 <= r_90);
        let mut rotated = probs;
        let k = rotate % rotated.len();
        rotated.rotate_left(k);
        let q = PVector::new(rotated).unwrap();
        prop_assert_eq!(r_99, redundancy_greedy(&q, 0.99));
    }
}

#[test]
fn scenario_curves_lie_between_subset_extremes() {
    use qdarwin_core::{scenario_curve, FractionSelection, ScenarioOrdering};
    for (n, m) in [(8usize, 3usize), (10, 2), (9, 9)] {
        let cfg = GhzJunkConfig::new(n, m).unwrap();
        let ov = ghz_junk_overlaps(cfg);
        let mut orderings = vec![
            ScenarioOrdering::scenario_a(cfg),
            ScenarioOrdering::scenario_b(cfg),
        ];
        if m >= 2 {
            orderings.push(ScenarioOrdering::scenario_c(cfg).unwrap());
        }
        // Pointwise extremes over all subsets of each size.
        let mut lo = vec![f64::INFINITY; n + 1];
        let mut hi = vec![f64::NEG_INFINITY; n + 1];
        for bits in 0..(1usize << n) {
            let sel =
                FractionSelection::new((0..n).filter(|&i| bits >> i & 1 == 1).collect()).unwrap();
            let l = sel.len();
            let v = qmi_exact(&ov, &sel).unwrap().nats();
            lo[l] = lo[l].min(v);
            hi[l] = hi[l].max(v);
        }
        for ordering in &orderings {
            let curve = scenario_curve(cfg, ordering).unwrap();
            for p in &curve.points {
                assert!(
                    p.mi_nats >= lo[p.l] - 1e-12 && p.mi_nats <= hi[p.l] + 1e-12,
                    "N={n} m={m} l={}: {} outside [{}, {}]",
                    p.l,
                    p.mi_nats,
                    lo[p.l],
                    hi[p.l]
                );
            }
        }
    }
}

#[test]
fn consensus_monotone_in_threshold_on_closed_form_curves() {
    use qdarwin_core::{averaged_curve, consensus_from_curve, AverageStrategy};
    for (n, m) in [(50usize, 3usize), (120, 10), (400, 25)] {
        let ov = ghz_junk_overlaps(GhzJunkConfig::new(n, m).unwrap());
        let curve = averaged_curve(
            &ov,
            AverageStrategy::Auto {
                samples: 10,
                seed: 0,
            },
            1,
        )
        .unwrap();
        let mut last = u64::MAX;
        for t in [0.2, 0.5, 0.8, 0.9, 0.99, 0.999, 1.0] {
            let c = consensus_from_curve(&curve, t).unwrap().consensus;
            assert!(c <= last);
            last = c;
        }
    }
}
