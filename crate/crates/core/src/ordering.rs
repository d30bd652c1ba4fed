//! Agreement between document orderings: Kendall's τ_b, Kendall's τ over
//! the union of two top-k lists (KTU), and extrapolated rank-biased
//! overlap.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::run::{pair_topics, Run, TopicScoreMap};

/// Cutoffs used for curves unless the caller picks its own.
pub const DEFAULT_CUTOFFS: [usize; 9] = [5, 10, 20, 30, 50, 100, 200, 500, 1000];

/// Default persistence for RBO.
pub const DEFAULT_RBO_P: f64 = 0.8;

/// [`DEFAULT_CUTOFFS`] clipped to `max_depth`. When even the smallest
/// default exceeds it, `max_depth` itself is the only cutoff.
pub fn default_cutoffs(max_depth: usize) -> Vec<usize> {
    let clipped: Vec<usize> = DEFAULT_CUTOFFS
        .iter()
        .copied()
        .filter(|&k| k <= max_depth)
        .collect();
    if clipped.is_empty() && max_depth > 0 {
        vec![max_depth]
    } else {
        clipped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Arithmetic mean of the per-topic values.
    Mean,
    /// Root of the mean squared per-topic values.
    RootMeanSquare,
}

impl Aggregation {
    pub fn label(self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::RootMeanSquare => "rms",
        }
    }

    fn apply(self, values: &[f64]) -> Option<f64> {
        match self {
            Aggregation::Mean => numeric::mean(values.iter().copied()),
            Aggregation::RootMeanSquare => numeric::mean(values.iter().map(|v| v * v)).map(f64::sqrt),
        }
    }
}

/// Per-topic values of a measure at several cutoffs, plus their
/// aggregate per cutoff. A topic whose value is undefined at a cutoff has
/// no entry there and does not contribute to the aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffCurve {
    pub measure: String,
    pub aggregation: Aggregation,
    pub cutoffs: Vec<usize>,
    pub per_topic: BTreeMap<String, BTreeMap<usize, f64>>,
    pub aggregate: BTreeMap<usize, f64>,
}

impl CutoffCurve {
    pub(crate) fn build(
        measure: impl Into<String>,
        aggregation: Aggregation,
        cutoffs: &[usize],
        per_topic: BTreeMap<String, BTreeMap<usize, f64>>,
    ) -> CutoffCurve {
        let aggregate = cutoffs
            .iter()
            .filter_map(|&k| {
                let values: Vec<f64> = per_topic.values().filter_map(|m| m.get(&k).copied()).collect();
                aggregation.apply(&values).map(|v| (k, v))
            })
            .collect();
        CutoffCurve {
            measure: measure.into(),
            aggregation,
            cutoffs: cutoffs.to_vec(),
            per_topic,
            aggregate,
        }
    }
}

pub(crate) fn validate_cutoffs(cutoffs: &[usize]) -> Result<()> {
    if cutoffs.is_empty() {
        return Err(Error::InvalidArgument("no cutoffs given".into()));
    }
    if cutoffs.contains(&0) {
        return Err(Error::InvalidArgument("cutoffs must be at least 1".into()));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("rank vectors must be finite".into()))
    }
}

/// Pairs tied within each run of equal keys, as `t(t-1)/2` summed over runs.
fn tied_pairs<T, F: Fn(&T, &T) -> bool>(sorted: &[T], same: F) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if same(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts by the second component and returns the number of strictly
/// inverted pairs.
fn merge_sort_inversions(items: &mut [(f64, f64)], buf: &mut Vec<(f64, f64)>) -> u64 {
    let n = items.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_sort_inversions(&mut items[..mid], buf) + merge_sort_inversions(&mut items[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if items[j].1 < items[i].1 {
            buf.push(items[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf.push(items[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&items[i..mid]);
    buf.extend_from_slice(&items[j..n]);
    items.copy_from_slice(buf);
    swaps
}

/// Kendall's τ_b between two paired score vectors, in O(n log n).
///
/// `(P - Q) / sqrt((P + Q + T_a)(P + Q + T_b))` with P and Q the concordant
/// and discordant pairs and T_a, T_b the pairs tied in only one vector.
/// Returns `Ok(None)` when τ_b is undefined (fewer than two items, or one
/// vector entirely tied).
pub fn kendall_tau_b(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    check_finite(a)?;
    check_finite(b)?;
    let n = a.len() as u64;
    if n < 2 {
        return Ok(None);
    }
    // + 0.0 folds -0.0 into 0.0 so total_cmp agrees with ==
    let mut pairs: Vec<(f64, f64)> = a.iter().zip(b).map(|(&x, &y)| (x + 0.0, y + 0.0)).collect();
    pairs.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let total = n * (n - 1) / 2;
    let tied_a = tied_pairs(&pairs, |p, q| p.0 == q.0);
    let tied_both = tied_pairs(&pairs, |p, q| p == q);
    let mut buf = Vec::with_capacity(pairs.len());
    let discordant = merge_sort_inversions(&mut pairs, &mut buf);
    let tied_b = tied_pairs(&pairs, |p, q| p.1 == q.1);

    let not_tied_b = total - tied_b;
    let not_tied_a = total - tied_a;
    if not_tied_a == 0 || not_tied_b == 0 {
        return Ok(None);
    }
    // add tied_both first: tied_a + tied_b may exceed total
    let concordant = total + tied_both - tied_a - tied_b - discordant;
    let numerator = concordant as f64 - discordant as f64;
    Ok(Some(numerator / (not_tied_b as f64 * not_tied_a as f64).sqrt()))
}

/// KTU for one topic at cutoff `k`: τ_b over the union of both top-k
/// lists, where a document missing from one list takes rank `k + 1` in it.
pub fn ktu_at<S: AsRef<str>>(a: &[S], b: &[S], k: usize) -> Option<f64> {
    let top_a = &a[..a.len().min(k)];
    let top_b = &b[..b.len().min(k)];
    let pos_a: HashMap<&str, usize> = top_a.iter().enumerate().map(|(i, d)| (d.as_ref(), i + 1)).collect();
    let pos_b: HashMap<&str, usize> = top_b.iter().enumerate().map(|(i, d)| (d.as_ref(), i + 1)).collect();
    let union = top_a
        .iter()
        .map(AsRef::as_ref)
        .chain(top_b.iter().map(AsRef::as_ref).filter(|d| !pos_a.contains_key(d)));
    let absent = (k + 1) as f64;
    let (ra, rb): (Vec<f64>, Vec<f64>) = union
        .map(|d| {
            (
                pos_a.get(d).map_or(absent, |&r| r as f64),
                pos_b.get(d).map_or(absent, |&r| r as f64),
            )
        })
        .unzip();
    kendall_tau_b(&ra, &rb).expect("rank vectors are finite and equal length")
}

/// KTU curve over the topics shared by both runs.
pub fn ktu(orig: &Run, rep: &Run, cutoffs: &[usize]) -> Result<CutoffCurve> {
    validate_cutoffs(cutoffs)?;
    let pairing = pair_topics(orig, rep);
    if pairing.shared.is_empty() {
        return Err(Error::NoSharedTopics);
    }
    let per_topic = pairing
        .shared
        .iter()
        .map(|topic| {
            let a = orig.ranking(topic).unwrap_or_default();
            let b = rep.ranking(topic).unwrap_or_default();
            let values = cutoffs
                .iter()
                .filter_map(|&k| ktu_at(&a, &b, k).map(|v| (k, v)))
                .collect();
            (topic.clone(), values)
        })
        .collect();
    Ok(CutoffCurve::build("ktu", Aggregation::Mean, cutoffs, per_topic))
}

fn check_persistence(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("RBO persistence must lie in (0, 1), got {p}")))
    }
}

/// Extrapolated rank-biased overlap (RBO_ext) of two rankings with
/// persistence `p`.
///
/// Lists of different lengths are handled by assuming the documents seen
/// past the end of the shorter list keep the overlap proportion it had at
/// its end. Items must be unique within each list.
pub fn rbo<S: AsRef<str>>(a: &[S], b: &[S], p: f64) -> Result<f64> {
    check_persistence(p)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("ranking"));
    }
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (l, s) = (long.len(), short.len());

    let mut seen_long: HashSet<&str> = HashSet::with_capacity(l);
    let mut seen_short: HashSet<&str> = HashSet::with_capacity(s);
    let mut overlap = 0usize;
    let mut overlap_at_s = 0usize;
    let mut weight = 1.0; // p^(d-1)
    let mut series = 0.0;
    let mut comp = 0.0;
    for d in 1..=l {
        let x = long[d - 1].as_ref();
        if !seen_long.insert(x) {
            return Err(Error::InvalidArgument(format!("duplicate item {x:?} in ranking")));
        }
        if seen_short.contains(x) {
            overlap += 1;
        }
        if d <= s {
            let y = short[d - 1].as_ref();
            if !seen_short.insert(y) {
                return Err(Error::InvalidArgument(format!("duplicate item {y:?} in ranking")));
            }
            if seen_long.contains(y) {
                overlap += 1;
            }
            if d == s {
                overlap_at_s = overlap;
            }
        }
        let mut term = overlap as f64 / d as f64;
        if d > s {
            term += overlap_at_s as f64 * (d - s) as f64 / (s * d) as f64;
        }
        // Kahan step over the weighted terms
        let y = term * weight - comp;
        let t = series + y;
        comp = (t - series) - y;
        series = t;
        weight *= p;
    }
    // weight == p^l here
    let tail = ((overlap - overlap_at_s) as f64 / l as f64 + overlap_at_s as f64 / s as f64) * weight;
    Ok(((1.0 - p) * series + tail).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RboSummary {
    pub p: f64,
    pub scores: TopicScoreMap,
    pub mean: f64,
}

/// RBO per shared topic over the full canonical lists, with the mean.
pub fn rbo_run(orig: &Run, rep: &Run, p: f64) -> Result<RboSummary> {
    check_persistence(p)?;
    let pairing = pair_topics(orig, rep);
    if pairing.shared.is_empty() {
        return Err(Error::NoSharedTopics);
    }
    let scores = pairing
        .shared
        .iter()
        .map(|topic| {
            let a = orig.ranking(topic).unwrap_or_default();
            let b = rep.ranking(topic).unwrap_or_default();
            rbo(&a, &b, p).map(|v| (topic.clone(), v))
        })
        .collect::<Result<Vec<_>>>()?;
    let scores = TopicScoreMap::new("rbo", scores)?;
    let mean = crate::eval::arp(&scores)?;
    Ok(RboSummary { p, scores, mean })
}
