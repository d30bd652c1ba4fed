//! Text, JSON and CSV views of a [`ReproReport`].
//!
//! Text uses six decimals and `undef` for undefined values; JSON and CSV
//! carry full doubles (CSV leaves undefined cells empty).

use std::io::Write;

use crate::args::PlotKind;
use crate::error::CliError;
use crate::report::{Mode, ReproReport};

pub fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn fixed_opt(v: Option<f64>) -> String {
    v.map(fixed).unwrap_or_else(|| "undef".to_string())
}

pub fn json(report: &ReproReport, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, report)
        .map_err(|e| CliError::Input(format!("cannot serialize report: {e}")))?;
    writeln!(out)?;
    Ok(())
}

/// trec_eval-like rows: `measure<TAB>topic<TAB>value`, the mean keyed `all`.
fn evaluate_text(report: &ReproReport, out: &mut dyn Write) -> std::io::Result<()> {
    for (scores, mean) in report.per_topic.iter().zip(&report.arp_table) {
        for (topic, v) in &scores.scores {
            writeln!(out, "{}\t{}\t{}", scores.measure, topic, fixed(*v))?;
        }
        writeln!(out, "{}\tall\t{}", mean.measure, fixed(mean.value))?;
    }
    Ok(())
}

/// Four tab-separated columns: quantity, measure, key, value.
fn comparison_text(report: &ReproReport, out: &mut dyn Write) -> std::io::Result<()> {
    let mode = match report.mode {
        Mode::Reproduce => "reproduce",
        Mode::Replicate => "replicate",
        Mode::Evaluate => "evaluate",
    };
    let runs: Vec<String> = report.runs.iter().map(|r| format!("{}={}", r.role, r.tag)).collect();
    writeln!(out, "# {mode} {}", runs.join(" "))?;
    if let Some(orientation) = &report.delta_ri_orientation {
        writeln!(out, "# delta_ri = {orientation}")?;
    }
    for row in &report.arp_table {
        writeln!(out, "arp\t{}\t{}\t{}", row.measure, row.run, fixed(row.value))?;
    }
    for row in &report.fidelity {
        writeln!(out, "arp_delta\t{}\trep-orig\t{}", row.measure, fixed(row.arp_delta))?;
        writeln!(out, "rmse\t{}\tall\t{}", row.measure, fixed(row.rmse))?;
    }
    for row in &report.effect_points {
        writeln!(out, "er\t{}\t{}\t{}", row.point.measure, row.run_pair, fixed_opt(row.point.er))?;
        writeln!(
            out,
            "delta_ri\t{}\t{}\t{}",
            row.point.measure,
            row.run_pair,
            fixed_opt(row.point.delta_ri)
        )?;
    }
    for test in &report.tests {
        let name = match test.result.kind {
            reprokit::TestKind::Paired => "paired_t",
            reprokit::TestKind::UnpairedPooled => "unpaired_t",
            reprokit::TestKind::UnpairedWelch => "welch_t",
        };
        let key = test.comparison.replace(' ', "_");
        writeln!(out, "{name}\t{}\t{key}:t\t{}", test.measure, fixed_opt(test.result.statistic))?;
        writeln!(out, "{name}\t{}\t{key}:df\t{}", test.measure, fixed(test.result.df))?;
        writeln!(out, "{name}\t{}\t{key}:p\t{}", test.measure, fixed_opt(test.result.p_value))?;
    }
    for curve in &report.curves {
        for &k in &curve.cutoffs {
            for (topic, values) in &curve.per_topic {
                writeln!(out, "{}\t@{k}\t{topic}\t{}", curve.measure, fixed_opt(values.get(&k).copied()))?;
            }
            writeln!(
                out,
                "{}\t@{k}\t{}\t{}",
                curve.measure,
                curve.aggregation.label(),
                fixed_opt(curve.aggregate.get(&k).copied())
            )?;
        }
    }
    if let Some(rbo) = &report.rbo {
        for (topic, v) in &rbo.scores.scores {
            writeln!(out, "rbo\tp={}\t{topic}\t{}", rbo.p, fixed(*v))?;
        }
        writeln!(out, "rbo\tp={}\tmean\t{}", rbo.p, fixed(rbo.mean))?;
    }
    Ok(())
}

pub fn text(report: &ReproReport, out: &mut dyn Write) -> Result<(), CliError> {
    match report.mode {
        Mode::Evaluate => evaluate_text(report, out)?,
        Mode::Reproduce | Mode::Replicate => comparison_text(report, out)?,
    }
    Ok(())
}

fn full(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Plot-ready CSV. Fails with an unsupported-request error when the report
/// lacks the data for `kind`.
pub fn plot_csv(report: &ReproReport, kind: PlotKind, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Input(format!("cannot write CSV: {e}"));
    match kind {
        PlotKind::ArpBars => {
            w.write_record(["run", "measure", "value"]).map_err(csv_err)?;
            for row in &report.arp_table {
                w.write_record([row.run.as_str(), &row.measure, &row.value.to_string()])
                    .map_err(csv_err)?;
            }
        }
        PlotKind::CutoffCurves => {
            if report.curves.is_empty() {
                return Err(CliError::Unsupported(
                    "cutoff-curves needs a reproduce report".into(),
                ));
            }
            w.write_record(["measure", "topic", "cutoff", "value"]).map_err(csv_err)?;
            for curve in &report.curves {
                for (topic, values) in &curve.per_topic {
                    for &k in &curve.cutoffs {
                        w.write_record([&curve.measure, topic, &k.to_string(), &full(values.get(&k).copied())])
                            .map_err(csv_err)?;
                    }
                }
                for &k in &curve.cutoffs {
                    w.write_record([
                        curve.measure.as_str(),
                        curve.aggregation.label(),
                        &k.to_string(),
                        &full(curve.aggregate.get(&k).copied()),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        PlotKind::ErDriScatter => {
            if report.mode != Mode::Replicate {
                return Err(CliError::Unsupported(
                    "er-dri-scatter needs a replicate report".into(),
                ));
            }
            w.write_record(["run_pair", "measure", "er", "delta_ri"]).map_err(csv_err)?;
            for row in &report.effect_points {
                w.write_record([
                    row.run_pair.as_str(),
                    &row.point.measure,
                    &full(row.point.er),
                    &full(row.point.delta_ri),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
