use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "pprloc", version, about = "Seeded PageRank localization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Parse a SNAP edge list, clean it, and write an edge list or PPRG1 cache.
    Ingest(IngestArgs),
    /// Write a rank-skewed degree sequence, parity repaired.
    GenDegseq(GenDegseqArgs),
    /// Fit the decay exponent of a degree sequence or graph.
    FitDegseq(FitDegseqArgs),
    /// Generate a random graph realizing a degree sequence.
    GenGraph(GenGraphArgs),
    /// Solve seeded PageRank with Gauss-Southwell.
    Solve(SolveArgs),
    /// Localization curve: minimal nonzeros for each eps.
    Curve(CurveArgs),
    /// Nonzero-count bounds over grids of alpha and eps.
    Bound(BoundArgs),
    /// Closed-form localization on complete-bipartite graphs.
    Bipartite(BipartiteArgs),
    /// Global clustering coefficient, optionally against a Chung-Lu clone.
    Clustering(ClusteringArgs),
    /// Multi-stage experiments.
    Pipeline(PipelineArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::GenDegseq(_) => "gen-degseq",
            Command::FitDegseq(_) => "fit-degseq",
            Command::GenGraph(_) => "gen-graph",
            Command::Solve(_) => "solve",
            Command::Curve(_) => "curve",
            Command::Bound(_) => "bound",
            Command::Bipartite(_) => "bipartite",
            Command::Clustering(_) => "clustering",
            Command::Pipeline(_) => "pipeline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorArg {
    ChungLu,
    Exact,
}

/// Where outputs go and where the run manifest is written.
#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`, or stderr without --out.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphInput {
    /// Edge list, or a PPRG1 cache when the name ends in `.pprg`.
    #[arg(long)]
    pub graph: PathBuf,
    /// Treat an edge list as directed.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub lcc: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SequenceParams {
    #[arg(long)]
    pub n: Option<usize>,
    /// Maximum degree; defaults to ceil(sqrt(n)).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub delta: usize,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenDegseqArgs {
    #[command(flatten)]
    pub params: SequenceParams,
    /// Skip the parity repair.
    #[arg(long)]
    pub no_repair: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FitDegseqArgs {
    /// Degree sequence file, one degree per line.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    pub input: Option<PathBuf>,
    /// Fit the degrees of a graph instead.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GenGraphArgs {
    /// Target degree sequence file; otherwise generated from --n/--p.
    #[arg(long)]
    pub degseq: Option<PathBuf>,
    #[command(flatten)]
    pub params: SequenceParams,
    #[arg(long, value_enum, default_value_t = GeneratorArg::Exact)]
    pub generator: GeneratorArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub max_restarts: u32,
    /// Edge list, or PPRG1 cache when the name ends in `.pprg`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub eps: f64,
    /// `max-degree` or an input node id.
    #[arg(long, default_value = "max-degree")]
    pub seed_node: String,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Also write the solution as `node,value` CSV.
    #[arg(long)]
    pub vector_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub alpha: f64,
    /// Comma-separated decreasing values, or `default` (1e-1..1e-8).
    #[arg(long, default_value = "default")]
    pub eps_grid: String,
    /// l1, l2, deg-l1 or deg-l2.
    #[arg(long, default_value = "l1")]
    pub norm: String,
    #[arg(long, default_value = "max-degree")]
    pub seed_node: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    /// Graph size for the min(n, .) clause; unbounded when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub delta: usize,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated alpha values.
    #[arg(long, default_value = "0.25,0.5,0.85")]
    pub alpha: String,
    /// Single eps; overrides --eps-grid.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value = "default")]
    pub eps_grid: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BipartiteArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Size of the seed's partition.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Comma-separated norms, or `all`.
    #[arg(long, default_value = "all")]
    pub norm: String,
    /// Emit the growth table over doubling sizes instead of one record.
    #[arg(long)]
    pub table: bool,
    /// Sizes for --table, comma-separated.
    #[arg(long, default_value = "64,128,256,512,1024,2048,4096,8192")]
    pub sizes: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusteringArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Also measure a Chung-Lu clone with the same degrees.
    #[arg(long)]
    pub clone: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// With --clone, also compare 1-norm nonzeros at this alpha and eps.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Generated graph, localization curves and bounds per alpha.
    Figure4,
    /// Five exact-degree samples against one Chung-Lu sample.
    Consistency,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[command(flatten)]
    pub params: SequenceParams,
    #[arg(long, default_value = "0.85")]
    pub alpha: String,
    #[arg(long, default_value = "default")]
    pub eps_grid: String,
    #[arg(long, default_value = "l1")]
    pub norm: String,
    #[arg(long, value_enum, default_value_t = GeneratorArg::Exact)]
    pub generator: GeneratorArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "max-degree")]
    pub seed_node: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}
