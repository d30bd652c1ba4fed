//! Library side of the `reprokit` command: argument definitions, report
//! assembly and rendering. `main.rs` is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod error;
pub mod render;
pub mod report;
pub mod settings;

use std::io::{Read, Write};

use clap::Parser;

pub use args::Cli;
pub use error::CliError;
pub use report::ReproReport;

use args::{Command, Format, PlotSource};

/// Non-fatal notes for stderr: skipped topics, truncation, warnings.
pub fn diagnostics_lines(report: &ReproReport) -> Vec<String> {
    let d = &report.diagnostics;
    let mut lines = Vec::new();
    for s in &d.skipped {
        lines.push(format!(
            "warning: {} {}: skipped {} topic(s) without relevant judgments: {}",
            s.run,
            s.measure,
            s.topics.len(),
            s.topics.join(",")
        ));
    }
    for (run, n) in &d.truncated {
        if *n > 0 {
            lines.push(format!("warning: {run}: dropped {n} entries below depth {}", report.params.depth));
        }
    }
    lines.extend(d.warnings.iter().map(|w| format!("warning: {w}")));
    lines
}

fn emit(report: &ReproReport, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    for line in diagnostics_lines(report) {
        writeln!(err, "{line}")?;
    }
    match format {
        Format::Text => render::text(report, out),
        Format::Json => render::json(report, out),
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Evaluate(a) => emit(&commands::cmd_evaluate(a, stdin)?, a.common.format, out, err),
        Command::Reproduce(a) => emit(&commands::cmd_reproduce(a)?, a.common.format, out, err),
        Command::Replicate(a) => emit(&commands::cmd_replicate(a)?, a.common.format, out, err),
        Command::Plotdata(p) => {
            let report = match &p.source {
                PlotSource::FromReport { path } => {
                    let file = std::fs::File::open(path)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    serde_json::from_reader(std::io::BufReader::new(file))
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                }
                PlotSource::Evaluate(a) => commands::cmd_evaluate(a, stdin)?,
                PlotSource::Reproduce(a) => commands::cmd_reproduce(a)?,
                PlotSource::Replicate(a) => commands::cmd_replicate(a)?,
            };
            render::plot_csv(&report, p.kind, out)
        }
    }
}

/// Parses `args` and runs them, returning the process exit code. Usage
/// errors print clap's message and return 2.
pub fn run_from_args<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match run(&cli, stdin, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "reprokit: {e}");
            e.exit_code()
        }
    }
}
