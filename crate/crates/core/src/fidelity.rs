//! Closeness of per-topic scores between an original and a reproduced run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{arp, evaluate_run, MeasureKind, MeasureSpec};
use crate::numeric;
use crate::ordering::{validate_cutoffs, Aggregation, CutoffCurve};
use crate::run::{pair_topics, Qrels, Run, TopicScoreMap};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmseOptions {
    /// Divide by the original ARP.
    pub normalized: bool,
}

fn check_same_topics(orig: &TopicScoreMap, rep: &TopicScoreMap) -> Result<()> {
    if orig.measure != rep.measure {
        return Err(Error::MeasureMismatch(orig.measure.clone(), rep.measure.clone()));
    }
    let pairing = pair_topics(orig, rep);
    if !pairing.is_identical() {
        return Err(Error::TopicMismatch {
            only_a: pairing.only_a.len(),
            only_b: pairing.only_b.len(),
        });
    }
    if orig.is_empty() {
        return Err(Error::Empty("score map"));
    }
    Ok(())
}

/// Root mean square error between per-topic scores. Both maps must hold
/// the same measure over exactly the same topics.
pub fn rmse(orig: &TopicScoreMap, rep: &TopicScoreMap) -> Result<f64> {
    rmse_with(orig, rep, RmseOptions::default())
}

pub fn rmse_with(orig: &TopicScoreMap, rep: &TopicScoreMap, options: RmseOptions) -> Result<f64> {
    check_same_topics(orig, rep)?;
    let squared = orig
        .scores
        .iter()
        .map(|(topic, o)| (o - rep.scores[topic]).powi(2));
    let value = numeric::mean(squared).expect("non-empty").sqrt();
    if options.normalized {
        let base = arp(orig)?;
        if base == 0.0 {
            return Err(Error::Domain("cannot normalize RMSE by a zero ARP".into()));
        }
        return Ok(value / base);
    }
    Ok(value)
}

/// RMSE per cutoff for a cutoff-parameterized measure. Per-topic entries
/// hold `|orig - rep|`, so the root-mean-square aggregate is the RMSE.
pub fn rmse_curve(
    orig: &Run,
    rep: &Run,
    qrels: &Qrels,
    kind: MeasureKind,
    cutoffs: &[usize],
) -> Result<CutoffCurve> {
    if !kind.takes_cutoff() {
        return Err(Error::InvalidArgument(format!(
            "{} has no cutoff to vary",
            kind.label()
        )));
    }
    validate_cutoffs(cutoffs)?;
    let mut per_topic: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    for &k in cutoffs {
        let spec = MeasureSpec::new(kind, Some(k))?;
        let a = evaluate_run(orig, qrels, &spec)?;
        let b = evaluate_run(rep, qrels, &spec)?;
        check_same_topics(&a, &b)?;
        for (topic, x) in &a.scores {
            per_topic
                .entry(topic.clone())
                .or_default()
                .insert(k, (x - b.scores[topic]).abs());
        }
    }
    Ok(CutoffCurve::build(
        format!("rmse_{}", kind.label()),
        Aggregation::RootMeanSquare,
        cutoffs,
        per_topic,
    ))
}

/// `arp(rep) - arp(orig)`. Topic sets may differ.
pub fn arp_delta(orig: &TopicScoreMap, rep: &TopicScoreMap) -> Result<f64> {
    Ok(arp(rep)? - arp(orig)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn map(values: &[(&str, f64)]) -> TopicScoreMap {
        TopicScoreMap::new("m", values.iter().map(|(t, v)| (*t, *v))).unwrap()
    }

    #[test]
    fn rmse_examples() {
        let a = map(&[("t1", 0.2), ("t2", 0.4)]);
        assert_eq!(rmse(&a, &a).unwrap(), 0.0);
        let shifted = map(&[("t1", 0.45), ("t2", 0.65)]);
        assert_abs_diff_eq!(rmse(&a, &shifted).unwrap(), 0.25, epsilon = 1e-12);
        let swapped = map(&[("t1", 0.4), ("t2", 0.2)]);
        assert_abs_diff_eq!(rmse(&a, &swapped).unwrap(), ((0.04 + 0.04) / 2.0f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(rmse(&a, &swapped).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn rmse_errors() {
        let a = map(&[("t1", 0.2), ("t2", 0.4)]);
        let b = map(&[("t1", 0.2), ("t3", 0.4)]);
        assert_eq!(rmse(&a, &b).unwrap_err(), Error::TopicMismatch { only_a: 1, only_b: 1 });
        let empty = map(&[]);
        assert_eq!(rmse(&empty, &empty).unwrap_err(), Error::Empty("score map"));
        let mut other = a.clone();
        other.measure = "x".into();
        assert!(matches!(rmse(&a, &other), Err(Error::MeasureMismatch(..))));
    }

    #[test]
    fn normalized_rmse() {
        let a = map(&[("t1", 0.2), ("t2", 0.4)]);
        let b = map(&[("t1", 0.4), ("t2", 0.2)]);
        let v = rmse_with(&a, &b, RmseOptions { normalized: true }).unwrap();
        assert_abs_diff_eq!(v, 0.2 / 0.3, epsilon = 1e-12);
        let zero = map(&[("t1", 0.0)]);
        assert!(rmse_with(&zero, &zero, RmseOptions { normalized: true }).is_err());
    }

    #[test]
    fn arp_delta_examples() {
        let a = map(&[("t1", 0.2), ("t2", 0.4)]);
        assert_eq!(arp_delta(&a, &a).unwrap(), 0.0);
        let up = map(&[("t1", 0.3), ("t2", 0.5)]);
        assert_abs_diff_eq!(arp_delta(&a, &up).unwrap(), 0.1, epsilon = 1e-12);
        let elsewhere = map(&[("x", 0.5)]);
        assert_abs_diff_eq!(arp_delta(&a, &elsewhere).unwrap(), 0.2, epsilon = 1e-12);
        assert!(arp_delta(&a, &map(&[])).is_err());
    }

    #[test]
    fn equal_arp_can_hide_differences() {
        let a = map(&[("t1", 0.1), ("t2", 0.5), ("t3", 0.9)]);
        let b = map(&[("t1", 0.9), ("t2", 0.1), ("t3", 0.5)]);
        assert_abs_diff_eq!(arp_delta(&a, &b).unwrap(), 0.0, epsilon = 1e-15);
        assert!(rmse(&a, &b).unwrap() > 0.3);
    }

    fn single_topic(docs: &[&str]) -> Run {
        Run::from_entries("r", docs.iter().enumerate().map(|(i, d)| ("1", *d, -(i as f64)))).unwrap()
    }

    #[test]
    fn curve_single_topic_is_absolute_difference() {
        let qrels = Qrels {
            topics: [(
                "1".to_string(),
                [("a", 1), ("b", 2), ("c", 0)].iter().map(|(d, g)| (d.to_string(), *g)).collect(),
            )]
            .into_iter()
            .collect(),
        };
        let orig = single_topic(&["a", "b", "c"]);
        let rep = single_topic(&["c", "b", "a"]);
        let curve = rmse_curve(&orig, &rep, &qrels, MeasureKind::Precision, &[1, 2, 3]).unwrap();
        assert_abs_diff_eq!(curve.aggregate[&1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(curve.aggregate[&2], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(curve.aggregate[&3], 0.0, epsilon = 1e-15);

        let same = rmse_curve(&orig, &orig, &qrels, MeasureKind::Ndcg, &[1, 2, 3]).unwrap();
        assert!(same.aggregate.values().all(|&v| v == 0.0));
        assert!(rmse_curve(&orig, &rep, &qrels, MeasureKind::AveragePrecision, &[1]).is_err());
    }

    proptest! {
        #[test]
        fn rmse_bounds_and_symmetry(pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..40)) {
            let a = TopicScoreMap::new("m", pairs.iter().enumerate().map(|(i, p)| (i.to_string(), p.0))).unwrap();
            let b = TopicScoreMap::new("m", pairs.iter().enumerate().map(|(i, p)| (i.to_string(), p.1))).unwrap();
            let r = rmse(&a, &b).unwrap();
            prop_assert_eq!(r, rmse(&b, &a).unwrap());
            prop_assert!(r + 1e-12 >= arp_delta(&a, &b).unwrap().abs());
            prop_assert_eq!(r == 0.0, pairs.iter().all(|p| p.0 == p.1));
        }

        #[test]
        fn constant_shift(values in prop::collection::vec(0.0f64..1.0, 1..30), c in -1.0f64..1.0) {
            let a = TopicScoreMap::new("m", values.iter().enumerate().map(|(i, v)| (i.to_string(), *v))).unwrap();
            let b = TopicScoreMap::new("m", values.iter().enumerate().map(|(i, v)| (i.to_string(), v + c))).unwrap();
            prop_assert!((rmse(&a, &b).unwrap() - c.abs()).abs() < 1e-9);
        }
    }
}
