use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netentropy::entropy::{Conventions, UpsilonSource};
use netentropy::io::{Delimiter, EdgeListFormat, IndexBase, ReportFormat};
use netentropy::PairConvention;

#[derive(Debug, Parser)]
#[command(name = "netentropy", version, about = "Structure entropies of complex networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute degree, betweenness and Tsallis structure entropies of an edge list
    Compute(ComputeArgs),
    /// Write the edge list of a reference or grown topology
    Generate(GenerateArgs),
    /// Run the growth procedure once and write its per-iteration trace
    Grow(GrowArgs),
    /// Run the growth procedure over a grid of sizes, iteration counts and seeds
    Sweep(SweepArgs),
    /// Compute a report for every dataset listed in a manifest
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Unordered,
    Ordered,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SourceArg {
    Raw,
    Normalized,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    JsonLines,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::JsonLines => ReportFormat::JsonLines,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConventionArgs {
    /// Count each unordered source/target pair once, or both orders
    #[arg(long, value_enum)]
    pub pair_convention: Option<ConventionArg>,
    /// Betweenness fed to the per-node exponents
    #[arg(long, value_enum)]
    pub upsilon_source: Option<SourceArg>,
}

impl ConventionArgs {
    /// Flags override `base` field by field.
    pub fn apply(&self, base: Conventions) -> Conventions {
        let pair = match self.pair_convention {
            Some(ConventionArg::Unordered) => PairConvention::Unordered,
            Some(ConventionArg::Ordered) => PairConvention::Ordered,
            None => base.pair_convention,
        };
        let source = match self.upsilon_source {
            Some(SourceArg::Raw) => UpsilonSource::Raw,
            Some(SourceArg::Normalized) => UpsilonSource::Normalized,
            None => base.upsilon_source,
        };
        Conventions::new(pair, source)
    }
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Split fields on commas instead of whitespace
    #[arg(long)]
    pub comma: bool,
    /// Read a third column as edge weight
    #[arg(long)]
    pub weighted: bool,
    /// Node ids start at 1
    #[arg(long)]
    pub one_based: bool,
    /// Lines starting with this character are skipped
    #[arg(long, default_value_t = '#')]
    pub comment_prefix: char,
}

impl FormatArgs {
    pub fn edge_list_format(&self) -> EdgeListFormat {
        EdgeListFormat {
            delimiter: if self.comma { Delimiter::Comma } else { Delimiter::Whitespace },
            has_weights: self.weighted,
            index_base: if self.one_based { IndexBase::One } else { IndexBase::Zero },
            comment_prefix: self.comment_prefix,
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Network name in the report (defaults to the file stem)
    #[arg(long)]
    pub name: Option<String>,
    #[command(flatten)]
    pub edge_format: FormatArgs,
    #[command(flatten)]
    pub conventions: ConventionArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Complete,
    Ring,
    Dumbbell,
    Grown,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Node count
    #[arg(long)]
    pub n: Option<usize>,
    /// Ring coupling width
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Growth config file (grown only)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Growth rounds (grown only; overrides the config)
    #[arg(long)]
    pub iterations: Option<usize>,
    /// RNG seed (grown only; overrides the config)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub conventions: ConventionArgs,
    /// Trace CSV; standard output when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write the final graph as an edge list
    #[arg(long)]
    pub graph_output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Iteration counts, e.g. `1,5,10,15,20,25,30,50`
    #[arg(long)]
    pub k_list: String,
    /// Seeds as a list `0,1,2` or a half-open range `0..10`
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// Node counts (defaults to growth.seed_nodes from the config)
    #[arg(long)]
    pub nodes: Option<String>,
    #[command(flatten)]
    pub conventions: ConventionArgs,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Worker threads for grid cells
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Manifest lines: `name file nodes edges [one-based,comma,weighted]`
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory the manifest's file names are relative to (defaults to the
    /// manifest's directory)
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[command(flatten)]
    pub conventions: ConventionArgs,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}
