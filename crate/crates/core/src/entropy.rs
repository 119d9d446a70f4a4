//! Scalar entropy primitives. All entropies are in nats; the convention
//! `0 ln 0 = 0` applies throughout, and values in `[-CLAMP_TOL, 0)` clamp
//! to zero so that exact limits (pure states, deterministic outcomes) come
//! out exactly.

use crate::error::{Error, Result};

/// Absolute slack allowed before a probability or entropy is rejected
/// rather than clamped.
pub const CLAMP_TOL: f64 = 1e-12;

/// Tolerance on the total mass of an explicit distribution.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A real number validated to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    /// Validates `value`, clamping excursions within [`CLAMP_TOL`] back
    /// onto `[0, 1]` and rejecting anything farther out.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&value) {
            return Err(Error::InvalidProbability { value });
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// An entropy in natural-log units. Guaranteed nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyNats(f64);

impl EntropyNats {
    /// Wraps a computed entropy, clamping negative rounding residue.
    pub(crate) fn from_computed(value: f64) -> Self {
        Self(if value < 0.0 { 0.0 } else { value })
    }

    pub fn nats(self) -> f64 {
        self.0
    }
}

impl From<EntropyNats> for f64 {
    fn from(e: EntropyNats) -> f64 {
        e.0
    }
}

/// `-x ln x` with the `0 ln 0 = 0` convention. `x` must already be in `[0, 1]`.
#[inline]
pub(crate) fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Binary entropy `h(x) = -x ln x - (1-x) ln(1-x)`, unchecked fast path
/// for callers that guarantee `x` is in `[0, 1]`.
#[inline]
pub(crate) fn binary_entropy_raw(x: f64) -> f64 {
    let h = xlnx(x) + xlnx(1.0 - x);
    if h < 0.0 {
        0.0
    } else {
        h
    }
}

/// Binary entropy of a single probability, in nats. Ranges over `[0, ln 2]`.
pub fn binary_entropy(x: Probability) -> EntropyNats {
    EntropyNats::from_computed(binary_entropy_raw(x.value()))
}

/// Shannon entropy `-sum p_i ln p_i` of an explicit distribution.
///
/// The entries must sum to 1 within [`NORMALIZATION_TOL`].
pub fn shannon_entropy(dist: &[Probability]) -> Result<EntropyNats> {
    let sum: f64 = dist.iter().map(|p| p.value()).sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: NORMALIZATION_TOL,
        });
    }
    let h: f64 = dist.iter().map(|p| xlnx(p.value())).sum();
    Ok(EntropyNats::from_computed(h))
}

/// Von Neumann entropy from a spectrum of eigenvalues.
///
/// Eigenvalues below `-1e-9` are rejected; tiny negative noise is clipped
/// to zero and the spectrum renormalized before the entropy is taken.
/// The total must be 1 within `1e-6` (oracle-grade spectra carry more
/// rounding than explicit distributions).
pub fn von_neumann_entropy(spectrum: &[f64]) -> Result<EntropyNats> {
    const EIG_TOL: f64 = 1e-9;
    const SUM_TOL: f64 = 1e-6;
    for &lambda in spectrum {
        if lambda < -EIG_TOL {
            return Err(Error::NegativeEigenvalue { value: lambda });
        }
    }
    let clipped: Vec<f64> = spectrum.iter().map(|&l| l.max(0.0)).collect();
    let sum: f64 = clipped.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: SUM_TOL,
        });
    }
    let h: f64 = clipped.iter().map(|&l| xlnx(l / sum)).sum();
    Ok(EntropyNats::from_computed(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn p(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    #[test]
    fn binary_entropy_pure_and_maximal() {
        assert_eq!(binary_entropy(p(0.0)).nats(), 0.0);
        assert_eq!(binary_entropy(p(1.0)).nats(), 0.0);
        assert_abs_diff_eq!(binary_entropy(p(0.5)).nats(), LN_2, epsilon = 1e-15);
    }

    #[test]
    fn binary_entropy_at_three_quarters() {
        // -0.75 ln 0.75 - 0.25 ln 0.25, cross-checked against the Shannon
        // entropy of {0.75, 0.25}.
        let expected = 0.562_335_144_618_808_3;
        assert_abs_diff_eq!(binary_entropy(p(0.75)).nats(), expected, epsilon = 1e-15);
        let shannon = shannon_entropy(&[p(0.75), p(0.25)]).unwrap();
        assert_abs_diff_eq!(shannon.nats(), expected, epsilon = 1e-15);
    }

    #[test]
    fn probability_clamps_within_tolerance_only() {
        assert_eq!(Probability::new(-5e-13).unwrap().value(), 0.0);
        assert_eq!(Probability::new(1.0 + 5e-13).unwrap().value(), 1.0);
        assert!(Probability::new(-1e-9).is_err());
        assert!(Probability::new(1.0 + 1e-9).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn shannon_entropy_known_values() {
        assert_eq!(shannon_entropy(&[p(1.0)]).unwrap().nats(), 0.0);
        assert_abs_diff_eq!(
            shannon_entropy(&[p(0.5), p(0.5)]).unwrap().nats(),
            LN_2,
            epsilon = 1e-15
        );
        // Three-outcome distribution arising at P_f = 0.125.
        assert_abs_diff_eq!(
            shannon_entropy(&[p(0.5), p(0.125), p(0.375)])
                .unwrap()
                .nats(),
            0.974_314_752_869_349_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn shannon_entropy_rejects_unnormalized() {
        assert!(matches!(
            shannon_entropy(&[p(0.5), p(0.4)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn shannon_uniform_is_ln_n() {
        for n in 1..=64usize {
            let dist = vec![p(1.0 / n as f64); n];
            assert_abs_diff_eq!(
                shannon_entropy(&dist).unwrap().nats(),
                (n as f64).ln(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn von_neumann_matches_binary_entropy_on_rank_two() {
        for &lambda in &[0.0, 0.1, 0.25, 0.5, 0.75, 1.0] {
            assert_abs_diff_eq!(
                von_neumann_entropy(&[lambda, 1.0 - lambda]).unwrap().nats(),
                binary_entropy(p(lambda)).nats(),
                epsilon = 1e-14
            );
        }
        // Spectrum (1 +- 0.5)/2 of a rank-2 reduced state with overlap 0.5.
        assert_abs_diff_eq!(
            von_neumann_entropy(&[0.75, 0.25]).unwrap().nats(),
            0.562_335_144_618_808_3,
            epsilon = 1e-15
        );
    }

    #[test]
    fn von_neumann_clips_spectral_noise() {
        let s = von_neumann_entropy(&[1.0 - 1e-11, -1e-11, 1e-11, 1e-11]).unwrap();
        assert_abs_diff_eq!(s.nats(), 0.0, epsilon = 1e-9);
        assert!(von_neumann_entropy(&[1.1, -0.1]).is_err());
        assert!(matches!(
            von_neumann_entropy(&[0.4, 0.4]),
            Err(Error::NotNormalized { .. })
        ));
    }
}
