//! Oracle cross-checks behind `qdarwin validate`: every closed form the
//! library relies on is compared against brute-force statevector or
//! classical computations at small sizes, and the command fails loudly on
//! the first discrepancy.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;

use qdarwin_core::oracle::{
    averaged_qmi_brute, build_state_ghz_junk, build_state_icnot, build_state_icnot_gates,
    classical_mi_brute, qmi_brute,
};
use qdarwin_core::{
    accessible_mi, averaged_qmi_enumerated, ghz_junk_averaged_closed_form, ghz_junk_overlaps,
    p_half_product, qmi_exact, system_entropy, FractionSelection, GhzJunkConfig, OverlapVector,
    PVector,
};

struct CheckResult {
    name: &'static str,
    cases: usize,
    max_dev: f64,
    tolerance: f64,
    first_failure: Option<String>,
}

impl CheckResult {
    fn passed(&self) -> bool {
        self.first_failure.is_none() && self.max_dev <= self.tolerance
    }
}

fn random_overlaps(rng: &mut ChaCha8Rng, n: usize) -> OverlapVector {
    OverlapVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, l: usize) -> FractionSelection {
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..l {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
    }
    indices.truncate(l);
    FractionSelection::new(indices).unwrap()
}

fn icnot_state_for(ov: &OverlapVector) -> qdarwin_core::oracle::StateVector {
    let p = PVector::new(ov.overlaps().iter().map(|&o| 1.0 - o * o).collect()).unwrap();
    build_state_icnot(&p).unwrap()
}

/// Test-harness hook: with `QDARWIN_VALIDATE_INJECT_FAULT=1` in the
/// environment the first closed-form value is perturbed, which must make
/// the run exit nonzero.
fn fault_injection() -> f64 {
    match std::env::var("QDARWIN_VALIDATE_INJECT_FAULT") {
        Ok(v) if v == "1" => 1e-6,
        _ => 0.0,
    }
}

fn check_qmi_vs_oracle(n_max: usize, cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fault = fault_injection();
    let tolerance = 1e-9;
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    for case in 0..cases {
        let n = rng.random_range(1..=n_max);
        let ov = random_overlaps(&mut rng, n);
        let sv = icnot_state_for(&ov);
        let l = rng.random_range(0..=n);
        let sel = random_subset(&mut rng, n, l);
        let closed = qmi_exact(&ov, &sel).unwrap().nats() + if case == 0 { fault } else { 0.0 };
        let brute = qmi_brute(&sv, &sel).unwrap().nats();
        let dev = (closed - brute).abs();
        max_dev = max_dev.max(dev);
        if dev > tolerance && first_failure.is_none() {
            first_failure = Some(format!(
                "case {case}: overlaps={:?} subset={:?}: closed form {closed} vs oracle {brute}",
                ov.overlaps(),
                sel.indices()
            ));
        }
    }
    CheckResult {
        name: "qmi closed form vs statevector oracle",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

fn check_purity_complement(n_max: usize, cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let tolerance = 1e-8;
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    for case in 0..cases {
        let n = rng.random_range(1..=n_max.min(9));
        let ov = random_overlaps(&mut rng, n);
        let sv = icnot_state_for(&ov);
        let s = system_entropy(&ov).nats();
        let l = rng.random_range(0..=n);
        let sel = random_subset(&mut rng, n, l);
        let complement = sel.complement(n).unwrap();
        let total =
            qmi_brute(&sv, &sel).unwrap().nats() + qmi_brute(&sv, &complement).unwrap().nats();
        let dev = (total - 2.0 * s).abs();
        max_dev = max_dev.max(dev);
        if dev > tolerance && first_failure.is_none() {
            first_failure = Some(format!(
                "case {case}: overlaps={:?} subset={:?}: I(K)+I(comp)={total} vs 2S={}",
                ov.overlaps(),
                sel.indices(),
                2.0 * s
            ));
        }
    }
    CheckResult {
        name: "pure-state complement identity (oracle)",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

fn check_icnot_constructions(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let tolerance = 1e-12;
    let cases = cases.min(25);
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    for case in 0..cases {
        let n = rng.random_range(1..=8);
        let p = PVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
        let direct = build_state_icnot(&p).unwrap();
        let gates = build_state_icnot_gates(&p).unwrap();
        let dev = direct
            .amplitudes()
            .iter()
            .zip(gates.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        max_dev = max_dev.max(dev);
        if dev > tolerance && first_failure.is_none() {
            first_failure = Some(format!("case {case}: p={:?}", p.probs()));
        }
    }
    CheckResult {
        name: "icnot product vs gate construction",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

fn check_closed_form_vs_enumeration(n_max: usize) -> CheckResult {
    let tolerance = 1e-12;
    let mut max_dev: f64 = 0.0;
    let mut cases = 0;
    let mut first_failure = None;
    for n in 1..=n_max.min(12) {
        for m in 0..=n {
            let cfg = GhzJunkConfig::new(n, m).unwrap();
            let ov = ghz_junk_overlaps(cfg);
            for l in 0..=n {
                cases += 1;
                let closed = ghz_junk_averaged_closed_form(cfg, l).unwrap().nats();
                let exact = averaged_qmi_enumerated(&ov, l).unwrap().mi_nats;
                let dev = (closed - exact).abs();
                max_dev = max_dev.max(dev);
                if dev > tolerance && first_failure.is_none() {
                    first_failure = Some(format!(
                        "N={n} m={m} l={l}: closed {closed} vs enumerated {exact}"
                    ));
                }
            }
        }
    }
    CheckResult {
        name: "averaged closed form vs subset enumeration",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

fn check_ghz_average_vs_oracle() -> CheckResult {
    let tolerance = 1e-9;
    let mut max_dev: f64 = 0.0;
    let mut cases = 0;
    let mut first_failure = None;
    for (n, m) in [(8usize, 3usize), (7, 0), (6, 6)] {
        let cfg = GhzJunkConfig::new(n, m).unwrap();
        let sv = build_state_ghz_junk(cfg, [1.0.into(), 0.0.into()]).unwrap();
        for l in 0..=n {
            cases += 1;
            let brute = averaged_qmi_brute(&sv, l).unwrap().nats();
            let closed = ghz_junk_averaged_closed_form(cfg, l).unwrap().nats();
            let dev = (brute - closed).abs();
            max_dev = max_dev.max(dev);
            if dev > tolerance && first_failure.is_none() {
                first_failure = Some(format!(
                    "N={n} m={m} l={l}: oracle {brute} vs closed {closed}"
                ));
            }
        }
    }
    CheckResult {
        name: "averaged closed form vs statevector average",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

fn check_accessible_vs_classical(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let tolerance = 1e-12;
    let mut max_dev: f64 = 0.0;
    let mut first_failure = None;
    for case in 0..cases {
        let n = rng.random_range(1..=12);
        let p = PVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
        let l = rng.random_range(0..=n);
        let sel = random_subset(&mut rng, n, l);
        let p_half = p_half_product(&p, &sel).unwrap().value();
        let joint = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, p_half, 0.5 - p_half]);
        let closed = accessible_mi(&p, &sel).unwrap().nats();
        let brute = classical_mi_brute(&joint).unwrap().nats();
        let dev = (closed - brute).abs();
        max_dev = max_dev.max(dev);
        if dev > tolerance && first_failure.is_none() {
            first_failure = Some(format!(
                "case {case}: p={:?} subset={:?}: closed {closed} vs brute {brute}",
                p.probs(),
                sel.indices()
            ));
        }
    }
    CheckResult {
        name: "accessible info vs classical-MI brute force",
        cases,
        max_dev,
        tolerance,
        first_failure,
    }
}

pub(crate) fn cmd_validate(n_max: usize, cases: usize, seed: u64) -> anyhow::Result<ExitCode> {
    if n_max == 0 || n_max > 10 {
        return Err(crate::usage("--n-max must be in 1..=10"));
    }
    if cases == 0 {
        return Err(crate::usage("--cases must be positive"));
    }
    let results = [
        check_qmi_vs_oracle(n_max, cases, seed),
        check_purity_complement(n_max, cases, seed),
        check_icnot_constructions(cases, seed),
        check_closed_form_vs_enumeration(12),
        check_ghz_average_vs_oracle(),
        check_accessible_vs_classical(cases.max(100), seed),
    ];
    println!(
        "{:<48} {:>7} {:>12} {:>9} {:>6}",
        "check", "cases", "max dev", "tol", "status"
    );
    let mut all_pass = true;
    for r in &results {
        let pass = r.passed();
        all_pass &= pass;
        println!(
            "{:<48} {:>7} {:>12.3e} {:>9.0e} {:>6}",
            r.name,
            r.cases,
            r.max_dev,
            r.tolerance,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in results.iter().filter(|r| !r.passed()) {
            if let Some(failure) = &r.first_failure {
                eprintln!("{}: first failing case: {failure}", r.name);
            }
        }
        Ok(ExitCode::from(1))
    }
}
