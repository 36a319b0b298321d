//! Command-line front end for `resnet-core`.

pub mod commands;
pub mod error;
pub mod graph_file;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "resnet", version, about = "Effective resistance, Green's functions and harmonic measure on weighted graphs")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "RESNET_THREADS")]
    pub threads: Option<usize>,
    /// Omit the timestamp so identical invocations give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph family (or its truncation) as a JSON graph file.
    Generate(GenerateArgs),
    /// Effective resistance by every formula, or the full matrix.
    Resist(ResistArgs),
    /// Run the identity suite on a graph.
    Check(CheckArgs),
    /// Sample absorbed random walks and compare with the exact harmonic measure.
    Walk(WalkArgs),
    /// Closed-form values for the model families.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Halfline,
    Lattice,
    BinaryTree,
    NaryTree,
    Comb,
    ThreeResistors,
    BinomialChain,
    RandomTree,
    RandomConnected,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Truncation radius for infinite families.
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    /// Half-line growth: `c_{x,x+1} = e^{rate·x}`.
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Lattice dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Tree arity.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Tree level base: `c = b^level`.
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    /// Binary tree `c_+(n) = plus_scale · plus_ratio^n`.
    #[arg(long, default_value_t = 1.0)]
    pub plus_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    pub plus_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub minus_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    pub minus_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r3: f64,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub p_plus: f64,
    /// Vertex count of random families.
    #[arg(long, default_value_t = 20)]
    pub vertices: usize,
    #[arg(long, default_value_t = 10)]
    pub extra_edges: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResistArgs {
    pub graph: PathBuf,
    /// Vertex index or label; defaults to the base point.
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    /// `all`, or one of M1, M2, M3, M4, M7.
    #[arg(long, default_value = "all")]
    pub method: String,
    /// Write the full resistance matrix as CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub graph: PathBuf,
    /// Random trials per randomized check.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Also write the JSON report here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    pub graph: PathBuf,
    /// Vertex index or label; defaults to the base point.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    /// Override the file's frontier (comma-separated vertices).
    #[arg(long, value_delimiter = ',')]
    pub frontier: Option<Vec<String>>,
    /// Use the hop ball of this radius around the base point instead.
    #[arg(long, conflicts_with = "frontier")]
    pub radius: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Binomial,
    Nary,
    Continuum,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub p_plus: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    /// Tree level for the root distance.
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    /// Cross-check against a generated truncation.
    #[arg(long)]
    pub verify: bool,
    /// Chain width for the binomial check.
    #[arg(long, default_value_t = 40)]
    pub width: usize,
    /// Tree depth for the N-ary check.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("usage error: --threads must be positive");
            return 1;
        }
        // Fails only if a pool already exists, e.g. when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match commands::dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
