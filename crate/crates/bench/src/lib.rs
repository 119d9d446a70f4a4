//! Shared fixtures for the criterion benchmarks.

use qdarwin_core::{ghz_junk_overlaps, GhzJunkConfig, OverlapVector};

/// The large reference configuration: a thousand qubits, one in twenty
/// correlated.
pub fn fig2_large() -> GhzJunkConfig {
    GhzJunkConfig::new(1000, 50).expect("static config is valid")
}

/// A deterministic non-uniform overlap vector for subset benchmarks.
pub fn mixed_overlaps(n: usize) -> OverlapVector {
    OverlapVector::new((0..n).map(|i| (i as f64 * 0.37).sin().abs()).collect())
        .expect("values in [0, 1]")
}

/// Overlaps of the large reference configuration.
pub fn fig2_overlaps() -> OverlapVector {
    ghz_junk_overlaps(fig2_large())
}
