//! Measures for judging how closely a reimplemented retrieval system
//! reproduces (same collection) or replicates (different collection) the
//! runs of an original system.
//!
//! The measures are organized from most to least specific:
//!
//! * [`ordering`]: Kendall's τ over the union of top-k lists (KTU) and
//!   rank-biased overlap (RBO) between document orderings.
//! * [`fidelity`]: RMSE between per-topic scores, and ARP deltas.
//! * [`effects`]: effect ratio (ER) and delta relative improvement (ΔRI).
//! * [`stats`]: paired and unpaired Student t-tests.
//!
//! [`run`] holds the TREC run/qrels model and parsers, and [`eval`] the
//! trec_eval-compatible effectiveness measures every tier is built on.

pub mod effects;
pub mod error;
pub mod eval;
pub mod fidelity;
pub mod numeric;
pub mod ordering;
pub mod run;
pub mod stats;

pub use effects::{
    delta_relative_improvement, effect_points, effect_ratio, EffectPoint, ExperimentQuadruple,
};
pub use error::{Error, ParseError, Result};
pub use eval::{
    arp, average_precision, evaluate_run, ndcg_at_k, precision_at_k, MeasureKind, MeasureSpec,
};
pub use fidelity::{arp_delta, rmse, rmse_curve, rmse_with};
pub use ordering::{kendall_tau_b, ktu, rbo, rbo_run, Aggregation, CutoffCurve, RboSummary};
pub use run::{
    pair_topics, parse_qrels, parse_run, write_qrels, write_run, PairingReport, ParseOptions,
    Qrels, Run, RunEntry, TopicKeyed, TopicScoreMap, DEFAULT_DEPTH,
};
pub use stats::{
    paired_t_test, regularized_incomplete_beta, student_t_sf, unpaired_t_test, TestKind,
    TestResult,
};
