use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const ABOUT: &str = "Measure how closely reimplemented retrieval runs reproduce or replicate the originals";

const LONG_ABOUT: &str = "\
Measure how closely reimplemented retrieval runs reproduce or replicate the originals.

Reproduction compares runs on the same test collection: document ordering (KTU, RBO), \
per-topic effectiveness (RMSE), ARP deltas and paired t-tests. Replication compares an \
original baseline/advanced pair against a pair on a different collection: effect ratio (ER), \
delta relative improvement (ΔRI, original minus replicated) and unpaired t-tests.

p-values are reported as computed, with no pass/fail verdict. A low p-value only says the \
mean scores are unlikely to be equal under the test's assumptions; what that means for a \
reproduction is left to the user.

Exit codes: 0 success, 2 input error, 3 mismatched inputs, 4 unsupported request.";

#[derive(Debug, Parser)]
#[command(name = "reprokit", version, about = ABOUT, long_about = LONG_ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a run against qrels, trec_eval style
    Evaluate(EvaluateArgs),
    /// Compare a reproduced run with the original on the same collection
    Reproduce(ReproduceArgs),
    /// Compare a replicated baseline/advanced pair with the original pair
    Replicate(ReplicateArgs),
    /// Emit plot-ready CSV
    Plotdata(PlotdataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Measures, e.g. p@10, ap, ndcg@10 (repeatable or comma separated) [default: p@10,ap,ndcg@10]
    #[arg(short, long = "measure", value_delimiter = ',')]
    pub measures: Vec<String>,

    /// Entries evaluated per topic [default: $REPROKIT_DEPTH or 1000]
    #[arg(long)]
    pub depth: Option<usize>,

    /// TOML file with defaults for measures, cutoffs, rbo_p, welch and depth
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Accept run and qrels lines with extra trailing columns
    #[arg(long)]
    pub lenient: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Run file, or `-` for stdin
    pub run: String,
    pub qrels: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    pub orig: PathBuf,
    pub rep: PathBuf,
    pub qrels: PathBuf,

    /// Cutoffs for the KTU and RMSE curves [default: 5,10,20,30,50,100,200,500,1000 clipped to run depth]
    #[arg(long, value_delimiter = ',')]
    pub cutoffs: Vec<usize>,

    /// RBO persistence in (0, 1) [default: 0.8]
    #[arg(long)]
    pub rbo_p: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplicateArgs {
    #[arg(long)]
    pub orig_baseline: PathBuf,
    #[arg(long)]
    pub orig_advanced: PathBuf,
    #[arg(long)]
    pub rep_baseline: PathBuf,
    #[arg(long)]
    pub rep_advanced: PathBuf,
    /// Qrels of the original collection
    #[arg(long)]
    pub qrels_orig: PathBuf,
    /// Qrels of the replication collection
    #[arg(long)]
    pub qrels_rep: PathBuf,

    /// Use Welch's unequal-variance t-test instead of the pooled one
    #[arg(long)]
    pub welch: bool,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    ArpBars,
    CutoffCurves,
    ErDriScatter,
}

#[derive(Debug, Clone, Args)]
pub struct PlotdataArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKind,

    #[command(subcommand)]
    pub source: PlotSource,
}

#[derive(Debug, Clone, Subcommand)]
pub enum PlotSource {
    /// Read a JSON report written by `--format json`
    FromReport { path: PathBuf },
    Evaluate(EvaluateArgs),
    Reproduce(ReproduceArgs),
    Replicate(ReplicateArgs),
}
