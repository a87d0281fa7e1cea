use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "goldbach",
    version,
    about = "Exact Goldbach partition counts, sampling, and limit-law diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the Q₂ table for 2k ≤ 2n and store it in the cache.
    Count(CountArgs),
    /// Check the pair-count and derivative identities and the Euler product.
    Verify(VerifyArgs),
    /// Draw Goldbach partitions (or Goldbach numbers) uniformly.
    Sample(SampleArgs),
    /// List the partitions of one even number.
    Partitions(PartitionsArgs),
    /// Exact moments of Gₙ/n against the limit law.
    Moments(MomentsArgs),
    /// Exact CDF of Gₙ/n and its Kolmogorov distance to u².
    Cdf(CdfArgs),
    /// Deviations from the limit law over a list of n.
    Sweep(SweepArgs),
    /// Evaluate the odd-prime power series and its asymptote ratios.
    Series(SeriesArgs),
    /// Partial sums against their predicted asymptotes.
    Tauberian(TauberianArgs),
    /// Estimate Pr(Rₙ ≤ Gₙ) for an independent uniform Rₙ.
    Twostep(TwostepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildMethod {
    Direct,
    Convolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleMode {
    Partitions,
    Numbers,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write reports here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Where the count table comes from: `--table`, else the cache, else a fresh
/// convolution build.
#[derive(Debug, Args)]
pub struct TableArgs {
    /// Half the largest even number; optional when `--table` is given.
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub n: Option<u64>,
    /// Load the table from this cache file.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Generated and reported when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = BuildMethod::Convolution)]
    pub method: BuildMethod,
    /// Cache file to write; defaults to the cache directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rebuild even when a valid cache exists.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Largest n for the derivative identities (pair enumeration is quadratic in π(2n)).
    #[arg(long, default_value_t = 100_000)]
    pub derivative_max: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Number of draws.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = SampleMode::Partitions)]
    pub mode: SampleMode,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PartitionsArgs {
    /// Even number to split into two odd primes.
    #[arg(long)]
    pub m: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub table: TableArgs,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub orders: Vec<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Approximate number of CDF points to print; 0 prints only the distance.
    #[arg(long, default_value_t = 100)]
    pub points: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "mean,variance,second_moment,kolmogorov"
    )]
    pub quantities: Vec<String>,
    /// Load the table from this cache file; it must reach the largest n.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub z: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub eps: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TauberianArgs {
    /// Defaults to `--n` alone.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<u64>,
    #[command(flatten)]
    pub table: TableArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TwostepArgs {
    #[command(flatten)]
    pub table: TableArgs,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
