//! Replicability of the improvement an advanced run shows over its
//! baseline: the effect ratio (ER) and the delta relative improvement
//! (ΔRI).
//!
//! ER is the replicated mean per-topic improvement divided by the
//! original one. ΔRI is the original relative improvement minus the
//! replicated one, so a positive ΔRI means the replication delivers less
//! relative improvement. Perfect replication gives ER = 1 and ΔRI = 0.
//!
//! Both values are `None` when undefined (a zero denominator); they are
//! never coerced to 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::arp;
use crate::numeric;
use crate::run::{pair_topics, TopicScoreMap};

/// Scores of the four runs of a replication study under one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentQuadruple {
    orig_baseline: TopicScoreMap,
    orig_advanced: TopicScoreMap,
    rep_baseline: TopicScoreMap,
    rep_advanced: TopicScoreMap,
}

fn check_pair(baseline: &TopicScoreMap, advanced: &TopicScoreMap) -> Result<()> {
    let pairing = pair_topics(baseline, advanced);
    if !pairing.is_identical() {
        return Err(Error::TopicMismatch {
            only_a: pairing.only_a.len(),
            only_b: pairing.only_b.len(),
        });
    }
    if baseline.is_empty() {
        return Err(Error::Empty("score map"));
    }
    Ok(())
}

impl ExperimentQuadruple {
    /// Each baseline/advanced pair must cover the same topics; the two
    /// collections may differ. All four maps must name the same measure.
    pub fn new(
        orig_baseline: TopicScoreMap,
        orig_advanced: TopicScoreMap,
        rep_baseline: TopicScoreMap,
        rep_advanced: TopicScoreMap,
    ) -> Result<Self> {
        for other in [&orig_advanced, &rep_baseline, &rep_advanced] {
            if other.measure != orig_baseline.measure {
                return Err(Error::MeasureMismatch(
                    orig_baseline.measure.clone(),
                    other.measure.clone(),
                ));
            }
        }
        check_pair(&orig_baseline, &orig_advanced)?;
        check_pair(&rep_baseline, &rep_advanced)?;
        Ok(ExperimentQuadruple {
            orig_baseline,
            orig_advanced,
            rep_baseline,
            rep_advanced,
        })
    }

    pub fn measure(&self) -> &str {
        &self.orig_baseline.measure
    }

    pub fn orig_baseline(&self) -> &TopicScoreMap {
        &self.orig_baseline
    }

    pub fn orig_advanced(&self) -> &TopicScoreMap {
        &self.orig_advanced
    }

    pub fn rep_baseline(&self) -> &TopicScoreMap {
        &self.rep_baseline
    }

    pub fn rep_advanced(&self) -> &TopicScoreMap {
        &self.rep_advanced
    }
}

fn mean_improvement(baseline: &TopicScoreMap, advanced: &TopicScoreMap) -> f64 {
    numeric::mean(
        baseline
            .scores
            .iter()
            .map(|(topic, b)| advanced.scores[topic] - b),
    )
    .expect("pairs are non-empty")
}

/// Effect ratio, `None` when the original mean improvement is zero.
pub fn effect_ratio(q: &ExperimentQuadruple) -> Option<f64> {
    let orig = mean_improvement(&q.orig_baseline, &q.orig_advanced);
    let rep = mean_improvement(&q.rep_baseline, &q.rep_advanced);
    (orig != 0.0).then(|| rep / orig)
}

fn relative_improvement(baseline: &TopicScoreMap, advanced: &TopicScoreMap) -> Option<f64> {
    let base = arp(baseline).ok()?;
    let adv = arp(advanced).ok()?;
    (base != 0.0).then(|| (adv - base) / base)
}

/// Original minus replicated relative improvement, `None` when either
/// baseline ARP is zero.
pub fn delta_relative_improvement(q: &ExperimentQuadruple) -> Option<f64> {
    let orig = relative_improvement(&q.orig_baseline, &q.orig_advanced)?;
    let rep = relative_improvement(&q.rep_baseline, &q.rep_advanced)?;
    Some(orig - rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectPoint {
    pub measure: String,
    pub er: Option<f64>,
    pub delta_ri: Option<f64>,
}

/// One point per quadruple (typically one quadruple per measure).
pub fn effect_points(quadruples: &[ExperimentQuadruple]) -> Vec<EffectPoint> {
    quadruples
        .iter()
        .map(|q| EffectPoint {
            measure: q.measure().to_string(),
            er: effect_ratio(q),
            delta_ri: delta_relative_improvement(q),
        })
        .collect()
}
