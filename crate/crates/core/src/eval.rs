//! Per-topic effectiveness measures following trec_eval's conventions:
//! precision at k, average precision, and nDCG at k with linear gain and
//! a log2 discount.
//!
//! A document is relevant when its grade is positive; unjudged documents
//! count as non-relevant. Topics without any relevant judgment are skipped
//! rather than scored 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::run::{Qrels, Run, TopicScoreMap};

pub type Judgments = BTreeMap<String, i32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Precision,
    AveragePrecision,
    Ndcg,
}

impl MeasureKind {
    pub fn takes_cutoff(self) -> bool {
        !matches!(self, MeasureKind::AveragePrecision)
    }

    /// Short label used for cutoff curves.
    pub fn label(self) -> &'static str {
        match self {
            MeasureKind::Precision => "P",
            MeasureKind::AveragePrecision => "map",
            MeasureKind::Ndcg => "ndcg_cut",
        }
    }
}

/// A measure with its cutoff. Precision and nDCG always carry one;
/// average precision never does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureSpec {
    kind: MeasureKind,
    cutoff: Option<usize>,
}

impl MeasureSpec {
    pub fn precision(k: usize) -> Result<Self> {
        Self::new(MeasureKind::Precision, Some(k))
    }

    pub fn average_precision() -> Self {
        MeasureSpec {
            kind: MeasureKind::AveragePrecision,
            cutoff: None,
        }
    }

    pub fn ndcg(k: usize) -> Result<Self> {
        Self::new(MeasureKind::Ndcg, Some(k))
    }

    /// Average precision drops any cutoff it is given.
    pub fn new(kind: MeasureKind, cutoff: Option<usize>) -> Result<Self> {
        match (kind, cutoff) {
            (MeasureKind::AveragePrecision, _) => Ok(Self::average_precision()),
            (_, Some(k)) if k >= 1 => Ok(MeasureSpec {
                kind,
                cutoff: Some(k),
            }),
            (_, Some(_)) => Err(Error::InvalidArgument("cutoff must be at least 1".into())),
            (_, None) => Err(Error::InvalidArgument(format!(
                "{} requires a cutoff",
                kind.label()
            ))),
        }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    /// trec_eval-style name: `P_10`, `map`, `ndcg_cut_10`.
    pub fn name(&self) -> String {
        match self.cutoff {
            Some(k) => format!("{}_{}", self.kind.label(), k),
            None => self.kind.label().to_string(),
        }
    }

    /// P@10, AP and nDCG@10.
    pub fn defaults() -> Vec<MeasureSpec> {
        vec![
            MeasureSpec {
                kind: MeasureKind::Precision,
                cutoff: Some(10),
            },
            Self::average_precision(),
            MeasureSpec {
                kind: MeasureKind::Ndcg,
                cutoff: Some(10),
            },
        ]
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    /// Accepts `p@10`, `P_10`, `ap`, `map`, `ndcg@10`, `ndcg_cut_10`
    /// (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "ap" || lower == "map" {
            return Ok(Self::average_precision());
        }
        let split = |prefixes: &[&str]| {
            prefixes
                .iter()
                .find_map(|p| lower.strip_prefix(p).map(str::to_string))
        };
        let (kind, rest) = if let Some(rest) = split(&["ndcg_cut_", "ndcg_cut.", "ndcg@"]) {
            (MeasureKind::Ndcg, rest)
        } else if let Some(rest) = split(&["p_", "p.", "p@"]) {
            (MeasureKind::Precision, rest)
        } else {
            return Err(Error::InvalidArgument(format!("unknown measure {s:?}")));
        };
        let k: usize = rest
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad cutoff in measure {s:?}")))?;
        Self::new(kind, Some(k))
    }
}

fn grade<S: AsRef<str>>(judged: &Judgments, doc: &S) -> i32 {
    judged.get(doc.as_ref()).copied().unwrap_or(0)
}

/// Relevant documents in the top `k`, divided by `k` even when fewer than
/// `k` documents were retrieved.
///
/// # Panics
///
/// Panics if `k` is 0.
pub fn precision_at_k<S: AsRef<str>>(ranking: &[S], judged: &Judgments, k: usize) -> f64 {
    assert!(k >= 1, "precision cutoff must be at least 1");
    let hits = ranking
        .iter()
        .take(k)
        .filter(|d| grade(judged, d) > 0)
        .count();
    hits as f64 / k as f64
}

/// Non-interpolated average precision; `None` when the topic has no
/// relevant judgment.
pub fn average_precision<S: AsRef<str>>(ranking: &[S], judged: &Judgments) -> Option<f64> {
    let num_rel = judged.values().filter(|&&g| g > 0).count();
    if num_rel == 0 {
        return None;
    }
    let precisions = ranking
        .iter()
        .enumerate()
        .filter(|(_, d)| grade(judged, d) > 0)
        .enumerate()
        .map(|(hit, (i, _))| (hit + 1) as f64 / (i + 1) as f64);
    Some(numeric::sum(precisions) / num_rel as f64)
}

fn discount(position: usize) -> f64 {
    ((position + 1) as f64).log2()
}

/// nDCG at `k` with gain equal to the grade and a `1/log2(i+1)` discount.
/// The ideal ordering is built from every positive judgment of the topic.
/// `None` when no judgment is positive.
///
/// # Panics
///
/// Panics if `k` is 0.
pub fn ndcg_at_k<S: AsRef<str>>(ranking: &[S], judged: &Judgments, k: usize) -> Option<f64> {
    assert!(k >= 1, "ndcg cutoff must be at least 1");
    let mut ideal: Vec<i32> = judged.values().copied().filter(|&g| g > 0).collect();
    if ideal.is_empty() {
        return None;
    }
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = numeric::sum(
        ideal
            .iter()
            .take(k)
            .enumerate()
            .map(|(i, &g)| g as f64 / discount(i + 1)),
    );
    let dcg = numeric::sum(
        ranking
            .iter()
            .take(k)
            .enumerate()
            .map(|(i, d)| grade(judged, d).max(0) as f64 / discount(i + 1)),
    );
    Some(dcg / idcg)
}

fn score_topic(ranking: &[&str], judged: &Judgments, spec: &MeasureSpec) -> Option<f64> {
    if !judged.values().any(|&g| g > 0) {
        return None;
    }
    match (spec.kind, spec.cutoff) {
        (MeasureKind::Precision, Some(k)) => Some(precision_at_k(ranking, judged, k)),
        (MeasureKind::Ndcg, Some(k)) => ndcg_at_k(ranking, judged, k),
        (MeasureKind::AveragePrecision, _) => average_precision(ranking, judged),
        (_, None) => unreachable!("MeasureSpec constructors enforce cutoffs"),
    }
}

/// Scores every run topic that has at least one relevant judgment.
/// Other run topics end up in the result's `skipped` set.
pub fn evaluate_run(run: &Run, qrels: &Qrels, spec: &MeasureSpec) -> Result<TopicScoreMap> {
    let mut out = TopicScoreMap {
        measure: spec.name(),
        scores: BTreeMap::new(),
        skipped: Default::default(),
    };
    for (topic, entries) in &run.topics {
        let ranking: Vec<&str> = entries.iter().map(|e| e.doc_id.as_str()).collect();
        match qrels.topic(topic).and_then(|j| score_topic(&ranking, j, spec)) {
            Some(score) => {
                out.scores.insert(topic.clone(), score);
            }
            None => {
                out.skipped.insert(topic.clone());
            }
        }
    }
    if out.scores.is_empty() {
        return Err(Error::NoEvaluableTopics {
            measure: out.measure,
        });
    }
    Ok(out)
}

/// Average retrieval performance: the mean score over topics.
pub fn arp(scores: &TopicScoreMap) -> Result<f64> {
    numeric::mean(scores.values()).ok_or(Error::Empty("score map"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn judged(pairs: &[(&str, i32)]) -> Judgments {
        pairs.iter().map(|(d, g)| (d.to_string(), *g)).collect()
    }

    #[test]
    fn precision_examples() {
        let j = judged(&[("d1", 1), ("d3", 2)]);
        assert_eq!(precision_at_k(&["d1", "d2", "d3", "d4"], &j, 4), 0.5);
        assert_eq!(precision_at_k(&["d2", "d4"], &j, 10), 0.0);
        assert_eq!(precision_at_k(&["d1", "d3", "d2"], &j, 2), 1.0);
        // short ranking still divides by k
        assert_eq!(precision_at_k(&["d1"], &j, 4), 0.25);
    }

    #[test]
    fn ap_examples() {
        assert_eq!(average_precision(&["d1"], &judged(&[("d1", 1)])), Some(1.0));
        let j = judged(&[("d1", 1), ("d3", 1)]);
        assert_abs_diff_eq!(
            average_precision(&["d1", "d2", "d3"], &j).unwrap(),
            (1.0 + 2.0 / 3.0) / 2.0,
            epsilon = 1e-15
        );
        assert_eq!(average_precision(&["d2"], &j), Some(0.0));
        assert_eq!(average_precision(&["d1"], &judged(&[("d1", 0)])), None);
    }

    #[test]
    fn ndcg_examples() {
        let j = judged(&[("a", 2), ("b", 0)]);
        assert_eq!(ndcg_at_k(&["a", "b"], &j, 2), Some(1.0));
        let got = ndcg_at_k(&["b", "a"], &j, 2).unwrap();
        assert_abs_diff_eq!(got, (2.0 / 3f64.log2()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(got, 0.630930, epsilon = 1e-6);
        let j = judged(&[("a", 3), ("b", 1), ("c", 3)]);
        assert_eq!(ndcg_at_k(&["c", "b"], &j, 1), Some(1.0));
        assert_eq!(ndcg_at_k(&["a"], &judged(&[("a", 0)]), 1), None);
    }

    #[test]
    fn measure_names_parse() {
        for (s, name) in [
            ("p@10", "P_10"),
            ("P_5", "P_5"),
            ("ap", "map"),
            ("MAP", "map"),
            ("ndcg@10", "ndcg_cut_10"),
            ("ndcg_cut_20", "ndcg_cut_20"),
        ] {
            assert_eq!(s.parse::<MeasureSpec>().unwrap().name(), name);
        }
        assert!("p@0".parse::<MeasureSpec>().is_err());
        assert!("bpref".parse::<MeasureSpec>().is_err());
        assert!(MeasureSpec::new(MeasureKind::Ndcg, None).is_err());
        assert_eq!(
            MeasureSpec::new(MeasureKind::AveragePrecision, Some(5))
                .unwrap()
                .cutoff(),
            None
        );
    }

    #[test]
    fn evaluate_skips_unjudged_topics() {
        let run = Run::from_entries(
            "t",
            [("1", "a", 2.0), ("1", "b", 1.0), ("2", "c", 1.0), ("3", "d", 1.0)],
        )
        .unwrap();
        let qrels = Qrels {
            topics: [
                ("1".to_string(), judged(&[("a", 1)])),
                ("2".to_string(), judged(&[("c", 0)])),
            ]
            .into_iter()
            .collect(),
        };
        let scores = evaluate_run(&run, &qrels, &MeasureSpec::average_precision()).unwrap();
        assert_eq!(scores.len(), 1);
        assert_eq!(scores.scores["1"], 1.0);
        assert_eq!(
            scores.skipped.iter().map(String::as_str).collect::<Vec<_>>(),
            ["2", "3"]
        );

        let only_unjudged = Run::from_entries("t", [("2", "c", 1.0)]).unwrap();
        assert!(matches!(
            evaluate_run(&only_unjudged, &qrels, &MeasureSpec::average_precision()),
            Err(Error::NoEvaluableTopics { .. })
        ));
    }

    #[test]
    fn arp_examples() {
        let m = TopicScoreMap::new("m", [("t1", 0.4), ("t2", 0.6)]).unwrap();
        assert_abs_diff_eq!(arp(&m).unwrap(), 0.5, epsilon = 1e-15);
        let m = TopicScoreMap::new("m", [("t1", 0.3)]).unwrap();
        assert_eq!(arp(&m).unwrap(), 0.3);
        let m = TopicScoreMap::new("m", (0..7).map(|i| (i.to_string(), 0.7))).unwrap();
        assert_abs_diff_eq!(arp(&m).unwrap(), 0.7, epsilon = 1e-15);
        assert!(arp(&TopicScoreMap::new("m", Vec::<(String, f64)>::new()).unwrap()).is_err());
    }

    /// AP by locating each relevant document's rank directly.
    fn ap_oracle(ranking: &[String], judged: &Judgments) -> f64 {
        let relevant: Vec<&String> = judged.iter().filter(|(_, &g)| g > 0).map(|(d, _)| d).collect();
        let mut ranks: Vec<usize> = relevant
            .iter()
            .filter_map(|d| ranking.iter().position(|r| r == *d).map(|p| p + 1))
            .collect();
        ranks.sort_unstable();
        let total: f64 = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (i + 1) as f64 / r as f64)
            .sum();
        total / relevant.len() as f64
    }

    fn arb_topic() -> impl Strategy<Value = (Vec<String>, Judgments)> {
        (
            prop::sample::subsequence((0..60).collect::<Vec<u32>>(), 1..60).prop_shuffle(),
            prop::collection::btree_map(0u32..80, 0i32..4, 1..50),
        )
            .prop_map(|(docs, grades)| {
                (
                    docs.into_iter().map(|d| format!("d{d}")).collect(),
                    grades.into_iter().map(|(d, g)| (format!("d{d}"), g)).collect(),
                )
            })
    }

    proptest! {
        #[test]
        fn ap_matches_rank_enumeration((ranking, judged) in arb_topic()) {
            match average_precision(&ranking, &judged) {
                Some(ap) => prop_assert!((ap - ap_oracle(&ranking, &judged)).abs() < 1e-12),
                None => prop_assert!(judged.values().all(|&g| g == 0)),
            }
        }

        #[test]
        fn ndcg_in_unit_interval((ranking, judged) in arb_topic(), k in 1usize..70) {
            if let Some(v) = ndcg_at_k(&ranking, &judged, k) {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
        }

        #[test]
        fn ideal_order_scores_one((_, judged) in arb_topic(), k in 1usize..70) {
            let mut ideal: Vec<(&String, &i32)> = judged.iter().filter(|(_, &g)| g > 0).collect();
            ideal.sort_by(|a, b| b.1.cmp(a.1));
            let ranking: Vec<&str> = ideal.iter().map(|(d, _)| d.as_str()).collect();
            if let Some(v) = ndcg_at_k(&ranking, &judged, k) {
                prop_assert!((v - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn relevant_prefix_count_non_decreasing((ranking, judged) in arb_topic()) {
            let mut prev = 0.0;
            for k in 1..=ranking.len() + 3 {
                let count = precision_at_k(&ranking, &judged, k) * k as f64;
                prop_assert!((count - count.round()).abs() < 1e-9);
                prop_assert!(count >= prev - 1e-9);
                prev = count;
            }
        }

        #[test]
        fn monotone_score_transform_is_invisible(
            (ranking, judged) in arb_topic(),
            scale in 0.01f64..100.0,
            shift in -10.0f64..10.0,
        ) {
            let n = ranking.len();
            let entries = |f: &dyn Fn(f64) -> f64| {
                ranking.iter().enumerate().map(|(i, d)| ("q", d.clone(), f((n - i) as f64))).collect::<Vec<_>>()
            };
            let a = Run::from_entries("a", entries(&|s| s)).unwrap();
            let b = Run::from_entries("b", entries(&|s| s * scale + shift)).unwrap();
            let qrels = Qrels { topics: [("q".to_string(), judged.clone())].into_iter().collect() };
            if judged.values().any(|&g| g > 0) {
                for spec in MeasureSpec::defaults() {
                    prop_assert_eq!(
                        evaluate_run(&a, &qrels, &spec).unwrap().scores,
                        evaluate_run(&b, &qrels, &spec).unwrap().scores
                    );
                }
            }
        }
    }
}
