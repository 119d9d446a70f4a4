//! Two-branch pure states `(|0>_S |A> + |1>_S |B>)/sqrt(2)` with product
//! branches, represented by the per-qubit branch overlaps
//! `o_k = |<a_k|b_k>|` alone.
//!
//! Every reduced state of such a state has rank at most 2, with eigenvalues
//! `(1 +- |o|)/2` where `o` is the overlap product of the *traced-out*
//! part's branches. That turns every mutual-information quantity into a
//! handful of binary entropies and keeps storage at `O(N)` even for
//! thousand-qubit environments.

use crate::entropy::{binary_entropy_raw, EntropyNats, CLAMP_TOL};
use crate::error::{Error, Result};

/// Per-environment-qubit branch overlaps, each in `[0, 1]`.
///
/// `o_k = 0` encodes a qubit perfectly correlated with the system,
/// `o_k = 1` a junk qubit identical across both branches.
///
/// Serializes as a bare JSON array; deserialization revalidates.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OverlapVector {
    overlaps: Vec<f64>,
}

impl TryFrom<Vec<f64>> for OverlapVector {
    type Error = Error;

    fn try_from(overlaps: Vec<f64>) -> Result<Self> {
        Self::new(overlaps)
    }
}

impl From<OverlapVector> for Vec<f64> {
    fn from(ov: OverlapVector) -> Vec<f64> {
        ov.overlaps
    }
}

impl OverlapVector {
    pub fn new(overlaps: Vec<f64>) -> Result<Self> {
        if overlaps.is_empty() {
            return Err(Error::InvalidParameter(
                "overlap vector needs at least one qubit".into(),
            ));
        }
        let mut overlaps = overlaps;
        for (index, o) in overlaps.iter_mut().enumerate() {
            if !o.is_finite() || *o < -CLAMP_TOL || *o > 1.0 + CLAMP_TOL {
                return Err(Error::InvalidOverlap { index, value: *o });
            }
            *o = o.clamp(0.0, 1.0);
        }
        Ok(Self { overlaps })
    }

    /// Number of environment qubits.
    pub fn len(&self) -> usize {
        self.overlaps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires N >= 1
    }

    pub fn overlaps(&self) -> &[f64] {
        &self.overlaps
    }

    pub fn get(&self, index: usize) -> Result<f64> {
        self.overlaps
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.overlaps.len(),
            })
    }

    /// True when every overlap is exactly 0 or 1, i.e. the state is of the
    /// GHZ-plus-junk form and combinatorial closed forms apply.
    pub fn is_ghz_junk(&self) -> bool {
        self.overlaps.iter().all(|&o| o == 0.0 || o == 1.0)
    }

    /// Overlap product over the whole environment.
    pub fn full_product(&self) -> f64 {
        self.overlaps.iter().product()
    }
}

/// A subset of environment-qubit indices (the fraction held by an
/// observer). Stored sorted; duplicates are rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionSelection {
    indices: Vec<usize>,
}

impl FractionSelection {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex { index: w[0] });
            }
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// The complementary selection within an environment of `n` qubits.
    pub fn complement(&self, n: usize) -> Result<Self> {
        self.validate(n)?;
        Ok(Self {
            indices: (0..n).filter(|i| !self.contains(*i)).collect(),
        })
    }

    /// Checks every index against an environment of `n` qubits.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last >= n => Err(Error::IndexOutOfRange {
                index: last,
                len: n,
            }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for FractionSelection {
    /// Convenience for trusted literals; panics on duplicates.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect()).expect("duplicate index in selection literal")
    }
}

/// Per-qubit flip probabilities `p_i` of the imperfect-CNOT interaction.
///
/// Serializes as a bare JSON array; deserialization revalidates.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PVector {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PVector {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<PVector> for Vec<f64> {
    fn from(p: PVector) -> Vec<f64> {
        p.probs
    }
}

impl PVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter(
                "p-vector needs at least one qubit".into(),
            ));
        }
        let mut probs = probs;
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -CLAMP_TOL || *p > 1.0 + CLAMP_TOL {
                return Err(Error::InvalidOverlap { index, value: *p });
            }
            *p = p.clamp(0.0, 1.0);
        }
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// One probability per line.
    pub fn to_plain_text(&self) -> String {
        to_plain_text(&self.probs)
    }

    pub fn from_plain_text(text: &str) -> Result<Self> {
        Self::new(parse_plain_text(text)?)
    }
}

impl OverlapVector {
    /// One overlap per line.
    pub fn to_plain_text(&self) -> String {
        to_plain_text(&self.overlaps)
    }

    pub fn from_plain_text(text: &str) -> Result<Self> {
        Self::new(parse_plain_text(text)?)
    }
}

fn to_plain_text(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

fn parse_plain_text(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(|line| {
            line.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("unparsable real: {line:?}")))
        })
        .collect()
}

/// Environment layout for the GHZ-plus-junk family: `n_correlated` qubits
/// perfectly correlated with the system, the rest junk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GhzJunkConfig {
    pub n_total: usize,
    pub n_correlated: usize,
}

impl GhzJunkConfig {
    pub fn new(n_total: usize, n_correlated: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidParameter(
                "environment must be nonempty".into(),
            ));
        }
        if n_correlated > n_total {
            return Err(Error::InvalidParameter(format!(
                "m = {n_correlated} correlated qubits exceed N = {n_total}"
            )));
        }
        Ok(Self {
            n_total,
            n_correlated,
        })
    }
}

/// Overlaps for the GHZ-plus-junk state: 0 on the first `m` (correlated)
/// indices, 1 on the rest. The junk single-qubit state never enters any
/// mutual-information value, since its branch overlap is 1 regardless.
pub fn ghz_junk_overlaps(cfg: GhzJunkConfig) -> OverlapVector {
    let mut overlaps = vec![0.0; cfg.n_correlated];
    overlaps.resize(cfg.n_total, 1.0);
    OverlapVector::new(overlaps).expect("a validated config yields valid overlaps")
}

/// Overlaps after each environment qubit scattered off the system through
/// an imperfect CNOT with flip probability `p_k`: `o_k = sqrt(1 - p_k)`.
pub fn icnot_overlaps(p: &PVector) -> OverlapVector {
    let overlaps = p.probs().iter().map(|&pk| (1.0 - pk).sqrt()).collect();
    OverlapVector::new(overlaps).expect("p in [0,1] yields overlaps in [0,1]")
}

/// Branch-overlap product over a selection; the empty selection gives 1.
pub fn subset_overlap(ov: &OverlapVector, sel: &FractionSelection) -> Result<f64> {
    sel.validate(ov.len())?;
    Ok(sel.indices().iter().map(|&i| ov.overlaps()[i]).product())
}

#[inline]
fn h_of_overlap(o: f64) -> f64 {
    binary_entropy_raw((1.0 + o) / 2.0)
}

/// Hot path shared with the averaging and scenario code: mutual
/// information for a subset given as a sorted, in-range index slice.
pub(crate) fn qmi_from_sorted(ov: &OverlapVector, sorted: &[usize]) -> f64 {
    debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
    let mut in_product = 1.0;
    let mut out_product = 1.0;
    let mut cursor = sorted.iter().peekable();
    for (i, &o) in ov.overlaps().iter().enumerate() {
        if cursor.peek() == Some(&&i) {
            cursor.next();
            in_product *= o;
        } else {
            out_product *= o;
        }
    }
    let mi = h_of_overlap(in_product * out_product) + h_of_overlap(in_product)
        - h_of_overlap(out_product);
    if mi < 0.0 {
        0.0
    } else {
        mi
    }
}

/// Quantum mutual information `I(S : E_K)` between the system and the
/// selected fraction, in closed form:
///
/// `I = h((1+o_full)/2) + h((1+o(K))/2) - h((1+o(complement))/2)`
///
/// where `o(.)` is the overlap product over the given set and `h` the
/// binary entropy. Every reduced state of a two-branch pure state has
/// rank at most 2 with eigenvalues `(1 +- o)/2`, `o` being the overlap
/// of the traced-out part; the form is validated against the dense
/// statevector oracle.
pub fn qmi_exact(ov: &OverlapVector, sel: &FractionSelection) -> Result<EntropyNats> {
    sel.validate(ov.len())?;
    Ok(EntropyNats::from_computed(qmi_from_sorted(
        ov,
        sel.indices(),
    )))
}

/// System entropy `S(rho_S) = h((1 + o_full)/2)`.
pub fn system_entropy(ov: &OverlapVector) -> EntropyNats {
    EntropyNats::from_computed(h_of_overlap(ov.full_product()))
}
