//! Brute-force ground truth at small sizes: dense statevectors, partial
//! traces, spectral entropies, mutual information from first principles,
//! exhaustive subset averages, and classical mutual information of an
//! explicit joint distribution.
//!
//! Qubit convention: the system is qubit 0 and environment qubit `k` of an
//! overlap or p-vector is oracle qubit `k + 1`. Basis index `i` carries
//! qubit `q` in bit `q` (qubit 0 least significant).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::branch::{FractionSelection, GhzJunkConfig, PVector};
use crate::combinatorics::{Combinations, CompensatedSum};
use crate::entropy::{von_neumann_entropy, xlnx, EntropyNats};
use crate::error::{Error, Result};

/// Hard cap on environment qubits (15 total with the system).
pub const MAX_ENV_QUBITS: usize = 14;
/// Hard cap on the dimension a partial trace may keep.
pub const MAX_KEPT_DIM: usize = 1 << 12;

const NORM_TOL: f64 = 1e-9;
/// Spectral noise below this is clamped to zero before entropies.
const SPECTRUM_CLAMP: f64 = 1e-12;

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    n_qubits: usize,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>, n_qubits: usize) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                sum: norm_sq,
                tolerance: NORM_TOL,
            });
        }
        Ok(Self { amps, n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Environment qubits (total minus the system).
    pub fn n_env(&self) -> usize {
        self.n_qubits - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

fn guard_env(n_env: usize) -> Result<()> {
    if n_env == 0 || n_env > MAX_ENV_QUBITS {
        return Err(Error::SizeGuard {
            qubits: n_env,
            max: MAX_ENV_QUBITS,
        });
    }
    Ok(())
}

/// The GHZ-plus-junk state: an equal superposition correlating the system
/// with the first `m` environment qubits, times `junk_state` on the rest.
/// No mutual-information quantity depends on `junk_state`.
pub fn build_state_ghz_junk(cfg: GhzJunkConfig, junk_state: [Complex64; 2]) -> Result<StateVector> {
    guard_env(cfg.n_total)?;
    let junk_norm = (junk_state[0].norm_sqr() + junk_state[1].norm_sqr()).sqrt();
    if junk_norm == 0.0 {
        return Err(Error::InvalidParameter("junk state has zero norm".into()));
    }
    let junk = [junk_state[0] / junk_norm, junk_state[1] / junk_norm];
    let n_total = cfg.n_total;
    let m = cfg.n_correlated;
    let dim = 1usize << (n_total + 1);
    let mut amps = vec![Complex64::ZERO; dim];
    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    // Indices whose system bit and first m environment bits agree.
    for junk_bits in 0..(1usize << (n_total - m)) {
        let mut junk_amp = Complex64::new(1.0, 0.0);
        for b in 0..(n_total - m) {
            junk_amp *= junk[(junk_bits >> b) & 1];
        }
        let junk_part = junk_bits << (m + 1);
        // System 0, correlated all 0.
        amps[junk_part] += half * junk_amp;
        // System 1, correlated all 1.
        let ones = (1usize << (m + 1)) - 1;
        amps[junk_part | ones] += half * junk_amp;
    }
    StateVector::new(amps, n_total + 1)
}

/// The post-interaction state of the imperfect-CNOT model, built directly
/// from its product form: the system-0 branch leaves the environment in
/// all zeros, the system-1 branch puts qubit `i` in
/// `sqrt(1-p_i)|0> + sqrt(p_i)|1>`.
pub fn build_state_icnot(p: &PVector) -> Result<StateVector> {
    let n = p.len();
    guard_env(n)?;
    let dim = 1usize << (n + 1);
    let mut amps = vec![Complex64::ZERO; dim];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    for env_bits in 0..(1usize << n) {
        let mut amp = FRAC_1_SQRT_2;
        for (i, &pi) in p.probs().iter().enumerate() {
            amp *= if (env_bits >> i) & 1 == 1 {
                pi.sqrt()
            } else {
                (1.0 - pi).sqrt()
            };
        }
        amps[(env_bits << 1) | 1] += Complex64::new(amp, 0.0);
    }
    StateVector::new(amps, n + 1)
}

/// The same state built operationally: `|+>_S |0...0>` followed by one
/// imperfect CNOT per environment qubit, applying
/// `sqrt(1-p) sigma_z + sqrt(p) sigma_x` to the target when the system
/// is `|1>`. Must agree with [`build_state_icnot`] to machine precision.
pub fn build_state_icnot_gates(p: &PVector) -> Result<StateVector> {
    let n = p.len();
    guard_env(n)?;
    let dim = 1usize << (n + 1);
    let mut amps = vec![Complex64::ZERO; dim];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    for (i, &pi) in p.probs().iter().enumerate() {
        apply_icnot(&mut amps, 0, i + 1, pi);
    }
    StateVector::new(amps, n + 1)
}

/// In-place imperfect CNOT on `(control, target)` with flip probability `p`.
fn apply_icnot(amps: &mut [Complex64], control: usize, target: usize, p: f64) {
    let c = (1.0 - p).sqrt();
    let s = p.sqrt();
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for idx in 0..amps.len() {
        // Visit each (control=1, target=0) index once and rotate the pair.
        if idx & cmask != 0 && idx & tmask == 0 {
            let partner = idx | tmask;
            let a0 = amps[idx];
            let a1 = amps[partner];
            amps[idx] = a0 * c + a1 * s;
            amps[partner] = a0 * s - a1 * c;
        }
    }
}

/// A reduced density matrix with its defining invariants checked.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    fn from_gram(mat: DMatrix<Complex64>) -> Result<Self> {
        let dm = Self { mat };
        dm.check()?;
        Ok(dm)
    }

    fn check(&self) -> Result<()> {
        let m = &self.mat;
        let trace = m.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                sum: trace.re,
                tolerance: NORM_TOL,
            });
        }
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > NORM_TOL {
                    return Err(Error::InvalidParameter(
                        "reduced matrix is not Hermitian".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Eigenvalues, descending, with sub-noise values clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut vals: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| if l.abs() < SPECTRUM_CLAMP { 0.0 } else { l })
            .collect();
        vals.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }

    pub fn entropy(&self) -> Result<EntropyNats> {
        von_neumann_entropy(&self.spectrum())
    }
}

/// Splits each full basis index into (kept bits, traced bits) and buckets
/// the amplitudes into a kept x traced matrix.
fn reshape(sv: &StateVector, kept: &[usize]) -> DMatrix<Complex64> {
    let total = sv.n_qubits;
    let traced: Vec<usize> = (0..total).filter(|q| !kept.contains(q)).collect();
    let kdim = 1usize << kept.len();
    let tdim = 1usize << traced.len();
    let mut m = DMatrix::<Complex64>::zeros(kdim, tdim);
    for (idx, &amp) in sv.amps.iter().enumerate() {
        if amp == Complex64::ZERO {
            continue;
        }
        let mut k = 0usize;
        for (pos, &q) in kept.iter().enumerate() {
            k |= ((idx >> q) & 1) << pos;
        }
        let mut t = 0usize;
        for (pos, &q) in traced.iter().enumerate() {
            t |= ((idx >> q) & 1) << pos;
        }
        m[(k, t)] += amp;
    }
    m
}

/// Reduced density matrix over the kept qubits (total-index convention:
/// 0 is the system). Preserves trace and Hermiticity by construction.
pub fn partial_trace(sv: &StateVector, keep: &FractionSelection) -> Result<DensityMatrix> {
    keep.validate(sv.n_qubits)?;
    let kdim = 1usize
        .checked_shl(keep.len() as u32)
        .ok_or(Error::SizeGuard {
            qubits: keep.len(),
            max: 12,
        })?;
    if kdim > MAX_KEPT_DIM {
        return Err(Error::SizeGuard {
            qubits: keep.len(),
            max: 12,
        });
    }
    let m = reshape(sv, keep.indices());
    DensityMatrix::from_gram(&m * m.adjoint())
}

/// Entropy of the reduced state over `kept` qubits, computed on whichever
/// side of the bipartition is smaller (their nonzero spectra coincide for
/// a pure global state).
fn subsystem_entropy(sv: &StateVector, kept: &[usize]) -> f64 {
    let total = sv.n_qubits;
    let small: Vec<usize> = if kept.len() * 2 <= total {
        kept.to_vec()
    } else {
        (0..total).filter(|q| !kept.contains(q)).collect()
    };
    let m = reshape(sv, &small);
    let gram = &m * m.adjoint();
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues
        .iter()
        .map(|&l| xlnx(if l < SPECTRUM_CLAMP { 0.0 } else { l }))
        .sum()
}

/// Mutual information `S(rho_S) + S(rho_E_sel) - S(rho_{S,E_sel})` from
/// spectral entropies. `sel` holds environment indices.
pub fn qmi_brute(sv: &StateVector, sel: &FractionSelection) -> Result<EntropyNats> {
    sel.validate(sv.n_env())?;
    let env: Vec<usize> = sel.indices().iter().map(|&i| i + 1).collect();
    let mut with_system = vec![0usize];
    with_system.extend(&env);
    let s_s = subsystem_entropy(sv, &[0]);
    let s_e = subsystem_entropy(sv, &env);
    let s_se = subsystem_entropy(sv, &with_system);
    Ok(EntropyNats::from_computed(s_s + s_e - s_se))
}

/// Exact mean of [`qmi_brute`] over all size-`l` environment subsets.
pub fn averaged_qmi_brute(sv: &StateVector, l: usize) -> Result<EntropyNats> {
    let n = sv.n_env();
    if l > n {
        return Err(Error::InvalidParameter(format!(
            "fraction size {l} exceeds environment size {n}"
        )));
    }
    let mut acc = CompensatedSum::new();
    let mut count = 0u64;
    let mut subsets = Combinations::new(n, l);
    while let Some(subset) = subsets.next_subset() {
        let sel = FractionSelection::new(subset.to_vec())?;
        acc.add(qmi_brute(sv, &sel)?.nats());
        count += 1;
    }
    Ok(EntropyNats::from_computed(acc.total() / count as f64))
}

/// Classical mutual information of an explicit joint distribution:
/// `H(rows) + H(columns) - H(joint)`.
pub fn classical_mi_brute(joint: &DMatrix<f64>) -> Result<EntropyNats> {
    let mut total = 0.0;
    for &v in joint.iter() {
        if v < -SPECTRUM_CLAMP {
            return Err(Error::InvalidParameter(format!(
                "negative joint probability {v}"
            )));
        }
        total += v.max(0.0);
    }
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            sum: total,
            tolerance: NORM_TOL,
        });
    }
    let mut h_joint = 0.0;
    for &v in joint.iter() {
        h_joint += xlnx(v.max(0.0));
    }
    let mut h_rows = 0.0;
    for i in 0..joint.nrows() {
        h_rows += xlnx(joint.row(i).iter().map(|v| v.max(0.0)).sum());
    }
    let mut h_cols = 0.0;
    for j in 0..joint.ncols() {
        h_cols += xlnx(joint.column(j).iter().map(|v| v.max(0.0)).sum());
    }
    Ok(EntropyNats::from_computed(h_rows + h_cols - h_joint))
}
