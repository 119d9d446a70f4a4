//! Mutual-information curves: one value per fraction size, with per-point
//! sampling metadata, serialized to CSV (`l,f,mi_nats,mi_normalized,stderr,samples`)
//! and JSON.

use serde::{Deserialize, Serialize};

/// One point of a mutual-information curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiPoint {
    /// Fraction size in qubits.
    pub l: usize,
    /// Fraction of the environment, `l / N`.
    pub f: f64,
    /// Mutual information in nats.
    pub mi_nats: f64,
    /// `mi_nats / S(rho_S)`; 0 when the system entropy vanishes.
    pub mi_normalized: f64,
    /// Standard error of the estimate; 0 for exact points.
    pub stderr: f64,
    /// Subsets enumerated or draws averaged for this point; 1 for
    /// closed-form points.
    pub samples: u64,
}

/// A mutual-information curve over fraction sizes of an `n_env`-qubit
/// environment, with points in strictly increasing `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiCurve {
    pub n_env: usize,
    /// System entropy used for normalization, in nats.
    pub system_entropy_nats: f64,
    pub points: Vec<MiPoint>,
}

impl MiCurve {
    pub fn new(n_env: usize, system_entropy_nats: f64) -> Self {
        Self {
            n_env,
            system_entropy_nats,
            points: Vec::new(),
        }
    }

    /// Appends a point, deriving `f` and the normalized value.
    pub fn push(&mut self, l: usize, mi_nats: f64, stderr: f64, samples: u64) {
        debug_assert!(self.points.last().is_none_or(|p| p.l < l));
        let s = self.system_entropy_nats;
        self.points.push(MiPoint {
            l,
            f: l as f64 / self.n_env as f64,
            mi_nats,
            mi_normalized: if s > 0.0 { mi_nats / s } else { 0.0 },
            stderr,
            samples,
        });
    }

    pub fn point_at(&self, l: usize) -> Option<&MiPoint> {
        self.points
            .binary_search_by_key(&l, |p| p.l)
            .ok()
            .map(|i| &self.points[i])
    }

    /// CSV with header, full-precision shortest round-trip decimals, LF
    /// line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,f,mi_nats,mi_normalized,stderr,samples\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.l, p.f, p.mi_nats, p.mi_normalized, p.stderr, p.samples
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serialization cannot fail")
    }
}
