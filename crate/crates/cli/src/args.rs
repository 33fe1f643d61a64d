use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gabor", version, about = "Spectra, ranks and angles of Gabor POVMs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue grid, rank and IC/SIC flags of G(g).
    Spectrum(Common),
    /// Rank of G(g).
    Rank(Common),
    /// Distinct values of |<g, M^k T^l g>|.
    Angles(Common),
    /// PGM image of |<g, M^k T^l g>| plus a CSV of raw values.
    Heatmap(Common),
    /// Apply symmetry transforms and compare before and after.
    Transform {
        #[command(flatten)]
        common: Common,
        /// Transform spec, repeatable or ';'-separated: phase:re,im
        /// translate:t mult:m quad:a,b,c quadsub:kappa,a,b,c
        #[arg(long = "apply", required = true)]
        apply: Vec<String>,
    },
    /// Random-restart search for a SIC fiducial vector.
    Search(SearchArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Dimension (required with --gen).
    #[arg(long)]
    pub d: Option<usize>,
    /// Generator: spike, const, comb:r, twospike:k,amp,t0,t1, alltop:a,b,c,
    /// bjorck, support:i,j,..:seed, haar:seed, randsupport:i,j,..:seed
    #[arg(long = "gen", conflicts_with_all = ["vec", "input"])]
    pub generator: Option<String>,
    /// Vector as a JSON array of [re, im] pairs.
    #[arg(long = "vec", conflicts_with = "input")]
    pub vec: Option<String>,
    /// JSON file holding a vector, or a report with a "vector" field.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Rescale the input vector to unit norm instead of rejecting it.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    /// Zero threshold for |a_{k,l}|.
    #[arg(long, env = "GABOR_TOL")]
    pub tol: Option<f64>,
    /// Clustering threshold for angle values.
    #[arg(long = "angle-tol")]
    pub angle_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (heatmap: the PGM path).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long = "max-iters", default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long = "convergence-tol", default_value_t = 1e-14)]
    pub convergence_tol: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// rank-gap, density, mub, dim45, supp-lemma, orbit-bound,
    /// transform-invariance or oracle-equivalence
    #[arg(long)]
    pub suite: String,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vector under test for the mub suite.
    #[arg(long = "gen", conflicts_with = "vec")]
    pub generator: Option<String>,
    #[arg(long = "vec")]
    pub vec: Option<String>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
