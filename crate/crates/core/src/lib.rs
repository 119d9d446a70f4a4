//! Objectivity metrics for two-branch system-environment states.
//!
//! A single system qubit correlates with an `N`-qubit environment through
//! a state of the form `(|0>_S |A> + |1>_S |B>)/sqrt(2)` with product
//! branches. Everything observable here — mutual information of any
//! environment fraction, subset averages, consensus and redundancy
//! figures — is a function of the per-qubit branch overlaps, which keeps
//! exact computations `O(N)` and leaves a dense statevector oracle to
//! certify the closed forms at small sizes.
//!
//! Modules:
//! - [`entropy`]: scalar entropy primitives (nats, `0 ln 0 = 0`).
//! - [`branch`]: the overlap representation and exact per-subset mutual
//!   information; GHZ-plus-junk and imperfect-CNOT constructors.
//! - [`fraction`]: subset-averaged curves (enumerated, sampled, closed
//!   form) and the non-averaged scenario curves.
//! - [`accessible`]: computational-basis classical mutual information for
//!   randomly drawn environments, with biased max/min variants.
//! - [`metrics`]: consensus, redundancy, plateau detection, and the
//!   excess-correlation bound.
//! - [`oracle`]: brute-force statevector ground truth for small `N`.

pub mod accessible;
pub mod branch;
pub mod combinatorics;
pub mod curve;
pub mod entropy;
pub mod error;
pub mod fraction;
pub mod metrics;
pub mod oracle;

pub use accessible::{
    accessible_mi, accessible_mi_from_p_half, averaged_accessible_curve, biased_accessible_curve,
    draw_pvector, p_half_product, BiasMode, DrawPlan, PDistribution,
};
pub use branch::{
    ghz_junk_overlaps, icnot_overlaps, qmi_exact, subset_overlap, system_entropy,
    FractionSelection, GhzJunkConfig, OverlapVector, PVector,
};
pub use curve::{MiCurve, MiPoint};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy, EntropyNats, Probability};
pub use error::{Error, Result};
pub use fraction::{
    averaged_curve, averaged_qmi_enumerated, averaged_qmi_enumerated_with_budget,
    averaged_qmi_sampled, ghz_junk_averaged_closed_form, scenario_curve, AverageStrategy,
    AveragedQmi, ScenarioKind, ScenarioOrdering, DEFAULT_ENUM_BUDGET,
};
pub use metrics::{
    consensus_from_curve, detect_plateau, discord_excess_bound, redundancy_ghz_junk,
    redundancy_greedy, redundancy_greedy_with_order, redundancy_mean, Crossing, DiscordExcess,
    GreedyOrder, ObjectivityReport, PlateauReport, RedundancyKind,
};
