//! Runs, qrels and per-topic score maps, with parsers and writers for the
//! TREC interchange formats.
//!
//! A run line has six whitespace-separated columns:
//!
//! ```text
//! 301 Q0 FBIS3-1 1 7.5 runA
//! ```
//!
//! (topic, literal column, document, rank, score, tag). A qrels line has
//! four: topic, iteration, document, relevance grade.
//!
//! Entries are ordered the way trec_eval orders them: by score descending,
//! ties broken by document id descending. The rank column of the input is
//! not used for ordering.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::num::NonZeroUsize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Entries kept per topic unless configured otherwise.
pub const DEFAULT_DEPTH: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept lines with more columns than the format requires.
    pub lenient: bool,
    /// Entries kept per topic after canonical sorting; `None` keeps all.
    pub depth: Option<NonZeroUsize>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            lenient: false,
            depth: NonZeroUsize::new(DEFAULT_DEPTH),
        }
    }
}

/// One retrieved document. Topic and run tag live on the enclosing [`Run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub doc_id: String,
    /// Canonical 1-based position within the topic.
    pub rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    /// Entries dropped because they fell below the evaluation depth.
    pub truncated: usize,
    /// Entries whose rank column disagreed with their canonical position.
    pub rank_mismatches: usize,
}

/// A ranked result list per topic.
///
/// Every topic list is sorted canonically and `rank` equals list position.
/// Equality compares tag and topics only; diagnostics are ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Run {
    pub tag: String,
    pub topics: BTreeMap<String, Vec<RunEntry>>,
    #[serde(default)]
    pub diagnostics: RunDiagnostics,
}

impl PartialEq for Run {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.topics == other.topics
    }
}

fn canonical_order(a: &RunEntry, b: &RunEntry) -> std::cmp::Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| b.doc_id.cmp(&a.doc_id))
}

impl Run {
    /// Builds a run from `(topic, doc, score)` triples, sorting each topic
    /// canonically. Duplicate pairs and non-finite scores are rejected.
    pub fn from_entries<I, T, D>(tag: impl Into<String>, entries: I) -> Result<Run>
    where
        I: IntoIterator<Item = (T, D, f64)>,
        T: Into<String>,
        D: Into<String>,
    {
        let mut topics: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
        let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
        for (i, (topic, doc, score)) in entries.into_iter().enumerate() {
            let (topic, doc) = (topic.into(), doc.into());
            if !score.is_finite() {
                return Err(ParseError::InvalidNumber {
                    line: i + 1,
                    field: "score",
                    value: score.to_string(),
                }
                .into());
            }
            if !seen.insert((topic.clone(), doc.clone())) {
                return Err(ParseError::Duplicate {
                    line: i + 1,
                    topic,
                    doc,
                }
                .into());
            }
            topics.entry(topic).or_default().push(RunEntry {
                doc_id: doc,
                rank: 0,
                score,
            });
        }
        if topics.is_empty() {
            return Err(ParseError::Empty.into());
        }
        let mut run = Run {
            tag: tag.into(),
            topics,
            diagnostics: RunDiagnostics::default(),
        };
        run.canonicalize(None);
        Ok(run)
    }

    fn canonicalize(&mut self, depth: Option<NonZeroUsize>) {
        for entries in self.topics.values_mut() {
            entries.sort_by(canonical_order);
            if let Some(depth) = depth {
                if entries.len() > depth.get() {
                    self.diagnostics.truncated += entries.len() - depth.get();
                    entries.truncate(depth.get());
                }
            }
            for (i, e) in entries.iter_mut().enumerate() {
                e.rank = i + 1;
            }
        }
    }

    /// Document ids of a topic in canonical order.
    pub fn ranking(&self, topic: &str) -> Option<Vec<&str>> {
        self.topics
            .get(topic)
            .map(|entries| entries.iter().map(|e| e.doc_id.as_str()).collect())
    }

    /// Longest topic list.
    pub fn max_depth(&self) -> usize {
        self.topics.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_entries(&self) -> usize {
        self.topics.values().map(Vec::len).sum()
    }
}

/// Graded relevance judgments; negative grades are stored as 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qrels {
    pub topics: BTreeMap<String, BTreeMap<String, i32>>,
}

impl Qrels {
    pub fn topic(&self, topic: &str) -> Option<&BTreeMap<String, i32>> {
        self.topics.get(topic)
    }

    /// Documents with a positive grade for `topic`.
    pub fn num_relevant(&self, topic: &str) -> usize {
        self.topic(topic)
            .map(|j| j.values().filter(|&&g| g > 0).count())
            .unwrap_or(0)
    }
}

/// Per-topic values of one measure. Topics that could not be scored are
/// listed in `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicScoreMap {
    pub measure: String,
    pub scores: BTreeMap<String, f64>,
    #[serde(default)]
    pub skipped: BTreeSet<String>,
}

impl TopicScoreMap {
    pub fn new<I, T>(measure: impl Into<String>, scores: I) -> Result<TopicScoreMap>
    where
        I: IntoIterator<Item = (T, f64)>,
        T: Into<String>,
    {
        let measure = measure.into();
        let mut map = BTreeMap::new();
        for (topic, score) in scores {
            let topic = topic.into();
            if !score.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite {measure} score for topic {topic}"
                )));
            }
            if map.insert(topic.clone(), score).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate {measure} score for topic {topic}"
                )));
            }
        }
        Ok(TopicScoreMap {
            measure,
            scores: map,
            skipped: BTreeSet::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.scores.values().copied()
    }
}

/// Anything that is keyed by topic id.
pub trait TopicKeyed {
    fn topic_ids(&self) -> BTreeSet<&str>;

    /// Entries dropped below the evaluation depth, if applicable.
    fn truncated(&self) -> usize {
        0
    }
}

impl TopicKeyed for Run {
    fn topic_ids(&self) -> BTreeSet<&str> {
        self.topics.keys().map(String::as_str).collect()
    }

    fn truncated(&self) -> usize {
        self.diagnostics.truncated
    }
}

impl TopicKeyed for TopicScoreMap {
    fn topic_ids(&self) -> BTreeSet<&str> {
        self.scores.keys().map(String::as_str).collect()
    }
}

impl TopicKeyed for Qrels {
    fn topic_ids(&self) -> BTreeSet<&str> {
        self.topics.keys().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub shared: BTreeSet<String>,
    pub only_a: BTreeSet<String>,
    pub only_b: BTreeSet<String>,
    pub truncated_a: usize,
    pub truncated_b: usize,
}

impl PairingReport {
    pub fn is_identical(&self) -> bool {
        self.only_a.is_empty() && self.only_b.is_empty()
    }
}

pub fn pair_topics<A: TopicKeyed + ?Sized, B: TopicKeyed + ?Sized>(a: &A, b: &B) -> PairingReport {
    let ta = a.topic_ids();
    let tb = b.topic_ids();
    let own = |set: std::collections::btree_set::Difference<'_, &str>| {
        set.map(|s| s.to_string()).collect::<BTreeSet<_>>()
    };
    PairingReport {
        shared: ta.intersection(&tb).map(|s| s.to_string()).collect(),
        only_a: own(ta.difference(&tb)),
        only_b: own(tb.difference(&ta)),
        truncated_a: a.truncated(),
        truncated_b: b.truncated(),
    }
}

/// Iterates non-blank lines as `(line_number, fields)`.
fn for_each_record<R: BufRead>(
    mut input: R,
    mut f: impl FnMut(usize, Vec<&str>) -> Result<(), ParseError>,
) -> Result<(), ParseError> {
    let mut buf = Vec::new();
    let mut line_no = 0usize;
    loop {
        buf.clear();
        line_no += 1;
        let n = input
            .read_until(b'\n', &mut buf)
            .map_err(|e| ParseError::Io {
                line: line_no,
                message: e.to_string(),
            })?;
        if n == 0 {
            return Ok(());
        }
        let line = std::str::from_utf8(&buf).map_err(|_| ParseError::Encoding { line: line_no })?;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        f(line_no, fields)?;
    }
}

fn check_field_count(line: usize, found: usize, expected: usize, lenient: bool) -> Result<(), ParseError> {
    if found < expected || (found > expected && !lenient) {
        return Err(ParseError::FieldCount {
            line,
            expected,
            found,
        });
    }
    Ok(())
}

/// Parses a six-column TREC run.
///
/// The run tag is taken from the first line. Entries are sorted
/// canonically, ranks rewritten, and each topic truncated to
/// `options.depth`.
pub fn parse_run<R: BufRead>(input: R, options: &ParseOptions) -> Result<Run, ParseError> {
    let mut tag: Option<String> = None;
    let mut topics: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
    let mut input_ranks: BTreeMap<(String, String), i64> = BTreeMap::new();

    for_each_record(input, |line, fields| {
        check_field_count(line, fields.len(), 6, options.lenient)?;
        let (topic, doc) = (fields[0], fields[2]);
        let rank: i64 = fields[3].parse().map_err(|_| ParseError::InvalidNumber {
            line,
            field: "rank",
            value: fields[3].to_string(),
        })?;
        let score: f64 = fields[4]
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| ParseError::InvalidNumber {
                line,
                field: "score",
                value: fields[4].to_string(),
            })?;
        match input_ranks.entry((topic.to_string(), doc.to_string())) {
            Entry::Occupied(_) => {
                return Err(ParseError::Duplicate {
                    line,
                    topic: topic.to_string(),
                    doc: doc.to_string(),
                })
            }
            Entry::Vacant(v) => {
                v.insert(rank);
            }
        }
        tag.get_or_insert_with(|| fields[5].to_string());
        topics.entry(topic.to_string()).or_default().push(RunEntry {
            doc_id: doc.to_string(),
            rank: 0,
            score,
        });
        Ok(())
    })?;

    let tag = tag.ok_or(ParseError::Empty)?;
    let mut run = Run {
        tag,
        topics,
        diagnostics: RunDiagnostics::default(),
    };
    run.canonicalize(options.depth);
    run.diagnostics.rank_mismatches = run
        .topics
        .iter()
        .flat_map(|(t, es)| es.iter().map(move |e| (t, e)))
        .filter(|(t, e)| input_ranks.get(&((*t).clone(), e.doc_id.clone())) != Some(&(e.rank as i64)))
        .count();
    Ok(run)
}

/// Parses four-column qrels. Negative grades are clamped to 0.
pub fn parse_qrels<R: BufRead>(input: R, options: &ParseOptions) -> Result<Qrels, ParseError> {
    let mut qrels = Qrels::default();
    let mut any = false;
    for_each_record(input, |line, fields| {
        check_field_count(line, fields.len(), 4, options.lenient)?;
        let grade: i32 = fields[3].parse().map_err(|_| ParseError::InvalidNumber {
            line,
            field: "relevance",
            value: fields[3].to_string(),
        })?;
        let judged = qrels.topics.entry(fields[0].to_string()).or_default();
        match judged.entry(fields[2].to_string()) {
            Entry::Occupied(_) => Err(ParseError::Duplicate {
                line,
                topic: fields[0].to_string(),
                doc: fields[2].to_string(),
            }),
            Entry::Vacant(v) => {
                v.insert(grade.max(0));
                any = true;
                Ok(())
            }
        }
    })?;
    if !any {
        return Err(ParseError::Empty);
    }
    Ok(qrels)
}

/// Writes a run in canonical order using `Q0` as the literal column.
pub fn write_run<W: Write>(run: &Run, mut out: W) -> std::io::Result<()> {
    for (topic, entries) in &run.topics {
        for e in entries {
            writeln!(out, "{} Q0 {} {} {} {}", topic, e.doc_id, e.rank, e.score, run.tag)?;
        }
    }
    Ok(())
}

pub fn write_qrels<W: Write>(qrels: &Qrels, mut out: W) -> std::io::Result<()> {
    for (topic, judged) in &qrels.topics {
        for (doc, grade) in judged {
            writeln!(out, "{topic} 0 {doc} {grade}")?;
        }
    }
    Ok(())
}
