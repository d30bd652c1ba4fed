//! Report builders for each subcommand. Pure given their inputs.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use reprokit::ordering::default_cutoffs;
use reprokit::{
    arp, arp_delta, effect_points, evaluate_run, ktu, pair_topics, paired_t_test, parse_qrels,
    parse_run, rbo_run, rmse, rmse_curve, unpaired_t_test, ExperimentQuadruple, MeasureSpec,
    PairingReport, ParseOptions, Qrels, Run, TopicScoreMap,
};

use crate::args::{EvaluateArgs, ReplicateArgs, ReproduceArgs};
use crate::error::CliError;
use crate::report::{
    ArpRow, EffectRow, FidelityRow, Mode, NamedTest, Params, ReproReport, RunInfo, SkippedTopics,
    TopicScores,
};
use crate::settings::Settings;

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_run(path: &Path, options: &ParseOptions) -> Result<Run, CliError> {
    parse_run(open(path)?, options).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_qrels(path: &Path, options: &ParseOptions) -> Result<Qrels, CliError> {
    parse_qrels(open(path)?, options).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_run_or_stdin(arg: &str, options: &ParseOptions, stdin: &mut dyn Read) -> Result<Run, CliError> {
    if arg == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf)?;
        parse_run(&buf[..], options).map_err(|e| CliError::Input(format!("<stdin>: {e}")))
    } else {
        load_run(Path::new(arg), options)
    }
}

fn evaluate(run: &Run, qrels: &Qrels, spec: &MeasureSpec, role: &str) -> Result<TopicScoreMap, CliError> {
    evaluate_run(run, qrels, spec).map_err(|e| CliError::Mismatch(format!("{role} ({}): {e}", run.tag)))
}

fn describe_pairing(what: &str, p: &PairingReport) -> String {
    let list = |s: &std::collections::BTreeSet<String>| {
        if s.is_empty() {
            "-".to_string()
        } else {
            s.iter().cloned().collect::<Vec<_>>().join(",")
        }
    };
    format!(
        "{what}: {} shared topic(s); only in first: {}; only in second: {}",
        p.shared.len(),
        list(&p.only_a),
        list(&p.only_b)
    )
}

struct Scored {
    role: &'static str,
    run: Run,
    scores: Vec<TopicScoreMap>,
}

fn score_all(
    role: &'static str,
    run: Run,
    qrels: &Qrels,
    settings: &Settings,
    report: &mut ReproReport,
) -> Result<Scored, CliError> {
    let mut scores = Vec::with_capacity(settings.measures.len());
    for spec in &settings.measures {
        let s = evaluate(&run, qrels, spec, role)?;
        report.arp_table.push(ArpRow {
            run: role.to_string(),
            measure: s.measure.clone(),
            value: arp(&s)?,
        });
        report.per_topic.push(TopicScores {
            run: role.to_string(),
            measure: s.measure.clone(),
            scores: s.scores.clone(),
        });
        if !s.skipped.is_empty() {
            report.diagnostics.skipped.push(SkippedTopics {
                run: role.to_string(),
                measure: s.measure.clone(),
                topics: s.skipped.iter().cloned().collect(),
            });
        }
        scores.push(s);
    }
    report.runs.push(RunInfo {
        role: role.to_string(),
        tag: run.tag.clone(),
    });
    report
        .diagnostics
        .truncated
        .insert(role.to_string(), run.diagnostics.truncated);
    Ok(Scored { role, run, scores })
}

fn params(settings: &Settings, cutoffs: Vec<usize>, rbo_p: Option<f64>, welch: Option<bool>) -> Params {
    Params {
        measures: settings.measures.iter().map(MeasureSpec::name).collect(),
        cutoffs,
        rbo_p,
        welch,
        depth: settings.depth,
    }
}

pub fn cmd_evaluate(args: &EvaluateArgs, stdin: &mut dyn Read) -> Result<ReproReport, CliError> {
    let settings = Settings::resolve(&args.common, &[], None, false)?;
    let options = settings.parse_options();
    let run = load_run_or_stdin(&args.run, &options, stdin)?;
    let qrels = load_qrels(&args.qrels, &options)?;
    let mut report = ReproReport::new(Mode::Evaluate, params(&settings, vec![], None, None));
    let role: &'static str = "run";
    score_all(role, run, &qrels, &settings, &mut report)?;
    // evaluate reports name the run by its tag
    let tag = report.runs[0].tag.clone();
    for row in &mut report.arp_table {
        row.run = tag.clone();
    }
    for row in &mut report.per_topic {
        row.run = tag.clone();
    }
    for row in &mut report.diagnostics.skipped {
        row.run = tag.clone();
    }
    let n = report.diagnostics.truncated.remove(role).unwrap_or(0);
    report.diagnostics.truncated.insert(tag, n);
    Ok(report)
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<ReproReport, CliError> {
    let settings = Settings::resolve(&args.common, &args.cutoffs, args.rbo_p, false)?;
    let options = settings.parse_options();
    let orig = load_run(&args.orig, &options)?;
    let rep = load_run(&args.rep, &options)?;
    let qrels = load_qrels(&args.qrels, &options)?;

    let pairing = pair_topics(&orig, &rep);
    if pairing.shared.is_empty() {
        return Err(CliError::Mismatch(describe_pairing("runs share no topics", &pairing)));
    }
    let cutoffs = match &settings.cutoffs {
        Some(c) => c.clone(),
        None => default_cutoffs(orig.max_depth().max(rep.max_depth())),
    };

    let mut report = ReproReport::new(
        Mode::Reproduce,
        params(&settings, cutoffs.clone(), Some(settings.rbo_p), None),
    );
    if !pairing.is_identical() {
        report
            .diagnostics
            .warnings
            .push(describe_pairing("run topic sets differ", &pairing));
    }
    report.diagnostics.pairing = Some(pairing);

    let orig = score_all("orig", orig, &qrels, &settings, &mut report)?;
    let rep = score_all("rep", rep, &qrels, &settings, &mut report)?;

    for (a, b) in orig.scores.iter().zip(&rep.scores) {
        let scored = pair_topics(a, b);
        if !scored.is_identical() {
            return Err(CliError::Mismatch(describe_pairing(
                &format!("evaluated {} topics differ", a.measure),
                &scored,
            )));
        }
        report.fidelity.push(FidelityRow {
            measure: a.measure.clone(),
            arp_orig: arp(a)?,
            arp_rep: arp(b)?,
            arp_delta: arp_delta(a, b)?,
            rmse: rmse(a, b)?,
        });
        if a.len() >= 2 {
            report.tests.push(NamedTest {
                measure: a.measure.clone(),
                comparison: format!("{} vs {}", orig.role, rep.role),
                result: paired_t_test(a, b)?,
            });
        } else {
            report
                .diagnostics
                .warnings
                .push(format!("{}: paired t-test needs at least 2 topics", a.measure));
        }
    }

    report.curves.push(ktu(&orig.run, &rep.run, &cutoffs)?);
    let mut kinds = Vec::new();
    for spec in &settings.measures {
        if spec.kind().takes_cutoff() && !kinds.contains(&spec.kind()) {
            kinds.push(spec.kind());
        }
    }
    for kind in kinds {
        report
            .curves
            .push(rmse_curve(&orig.run, &rep.run, &qrels, kind, &cutoffs)?);
    }
    report.rbo = Some(rbo_run(&orig.run, &rep.run, settings.rbo_p)?);
    Ok(report)
}

pub fn cmd_replicate(args: &ReplicateArgs) -> Result<ReproReport, CliError> {
    let settings = Settings::resolve(&args.common, &[], None, args.welch)?;
    let options = settings.parse_options();
    let runs = [
        &args.orig_baseline,
        &args.orig_advanced,
        &args.rep_baseline,
        &args.rep_advanced,
    ]
    .map(|p| load_run(p, &options));
    let [ob, oa, rb, ra] = runs;
    let (ob, oa, rb, ra) = (ob?, oa?, rb?, ra?);
    let qrels_orig = load_qrels(&args.qrels_orig, &options)?;
    let qrels_rep = load_qrels(&args.qrels_rep, &options)?;

    let mut report = ReproReport::new(
        Mode::Replicate,
        params(&settings, vec![], None, Some(settings.welch)),
    );
    report.delta_ri_orientation = Some("original minus replicated".into());
    let run_pair = format!("{}/{}", rb.tag, ra.tag);

    let ob = score_all("orig_baseline", ob, &qrels_orig, &settings, &mut report)?;
    let oa = score_all("orig_advanced", oa, &qrels_orig, &settings, &mut report)?;
    let rb = score_all("rep_baseline", rb, &qrels_rep, &settings, &mut report)?;
    let ra = score_all("rep_advanced", ra, &qrels_rep, &settings, &mut report)?;

    let mut quadruples = Vec::with_capacity(settings.measures.len());
    for i in 0..settings.measures.len() {
        for (base, adv) in [(&ob, &oa), (&rb, &ra)] {
            let p = pair_topics(&base.scores[i], &adv.scores[i]);
            if !p.is_identical() {
                return Err(CliError::Mismatch(describe_pairing(
                    &format!(
                        "{} vs {} evaluated {} topics differ",
                        base.role, adv.role, base.scores[i].measure
                    ),
                    &p,
                )));
            }
        }
        quadruples.push(ExperimentQuadruple::new(
            ob.scores[i].clone(),
            oa.scores[i].clone(),
            rb.scores[i].clone(),
            ra.scores[i].clone(),
        )?);
        for (orig, rep) in [(&ob, &rb), (&oa, &ra)] {
            let (x, y) = (&orig.scores[i], &rep.scores[i]);
            if x.len() < 2 || y.len() < 2 {
                report.diagnostics.warnings.push(format!(
                    "{}: unpaired t-test {} vs {} needs at least 2 topics per run",
                    x.measure, orig.role, rep.role
                ));
                continue;
            }
            report.tests.push(NamedTest {
                measure: x.measure.clone(),
                comparison: format!("{} vs {}", orig.role, rep.role),
                result: unpaired_t_test(x, y, settings.welch)?,
            });
        }
    }
    report.effect_points = effect_points(&quadruples)
        .into_iter()
        .map(|point| EffectRow {
            run_pair: run_pair.clone(),
            point,
        })
        .collect();
    Ok(report)
}
