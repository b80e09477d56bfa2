use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use abvar_core::localfield::PROBE_SEED;
use abvar_lmfdb::DEFAULT_BASE_URL;

/// Every flag can also be set through the environment variable shown in
/// its help text; flags given on the command line win.
pub const ENV_PREFIX: &str = "ABVAR_";

#[derive(Parser, Debug, Clone)]
#[command(name = "abvar", version, about = "Galois groups, Newton polygons and angle ranks of abelian varieties over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Never touch the network; labels must be cached or bundled.
    #[arg(long, global = true, env = "ABVAR_OFFLINE", value_parser = clap::builder::FalseyValueParser::new())]
    pub offline: bool,
    /// Directory for records fetched from the database.
    #[arg(long, global = true, env = "ABVAR_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Starting accuracy of complex root enclosures, in bits.
    #[arg(long, global = true, env = "ABVAR_PRECISION_BITS", default_value_t = 64,
          value_parser = clap::value_parser!(u32).range(32..=16384))]
    pub precision_bits: u32,
    /// Target p-adic precision of local factorizations.
    #[arg(long, global = true, env = "ABVAR_PADIC_PRECISION", default_value_t = 8,
          value_parser = clap::value_parser!(u32).range(1..=512))]
    pub padic_precision: u32,
    #[arg(long, global = true, env = "ABVAR_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the randomized valuation probes; recorded in the output.
    #[arg(long, global = true, env = "ABVAR_SEED", default_value_t = PROBE_SEED)]
    pub seed: u64,
    #[arg(long, global = true, env = "ABVAR_BASE_URL", default_value = DEFAULT_BASE_URL)]
    pub base_url: String,
    /// HTTP timeout in seconds.
    #[arg(long, global = true, env = "ABVAR_TIMEOUT", default_value_t = 20)]
    pub timeout: u64,
    /// Run batch work on one thread.
    #[arg(long, global = true, env = "ABVAR_SEQUENTIAL", value_parser = clap::builder::FalseyValueParser::new())]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    /// One JSON object per line, tagged by `kind`.
    Records,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Classify one isogeny class, a product of classes, or a polynomial.
    Analyze(AnalyzeArgs),
    /// Regenerate the subgroup and classification tables.
    Tables(TablesArgs),
    /// List the labelled subgroups of W_2d.
    Subgroups(SubgroupsArgs),
    /// Run the full pipeline on labels and check every certificate.
    Verify(VerifyArgs),
    /// Look for Weil polynomials realizing each transitive class.
    Search(SearchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeArgs {
    /// Isogeny-class labels such as 2.2.ac_d.
    #[arg(conflicts_with = "coeffs")]
    pub labels: Vec<String>,
    /// Multiply the listed classes before classifying.
    #[arg(long)]
    pub product: bool,
    /// Coefficients of P, leading term first, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "p")]
    pub coeffs: Option<Vec<i64>>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Args, Debug, Clone)]
pub struct TablesArgs {
    /// Table number, 1 to 14; all tables when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=14))]
    pub which: Option<u8>,
    /// Re-run the pipeline on every example label and compare with the rows.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SubgroupsArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub d: u64,
    /// Only transitive subgroups containing complex conjugation.
    #[arg(long)]
    pub transitive_iota: bool,
    /// Newton polygon tag; adds angle rank and realizability screen columns.
    #[arg(long)]
    pub np: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Labels to check; every bundled label when omitted.
    pub labels: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub d: u64,
    #[arg(long)]
    pub p: u64,
    /// Largest exponent r; fields F_{p^r} for r = 1..=r_max are searched.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=12))]
    pub r_max: u32,
    /// Extra cap on |a_j|, on top of the Weil bounds.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub height: Option<u64>,
    /// Progress file; an existing one with the same bounds is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Candidates per batch between checkpoint writes.
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch: u64,
    /// Stop after this many batches; rerun with the same checkpoint to go on.
    #[arg(long, requires = "checkpoint", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_batches: Option<u64>,
}
