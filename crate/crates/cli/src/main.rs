mod commands;
mod parse;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Plane-curve search over GF(2) and codes on ruled surfaces over GF(2^m).
///
/// Outputs named by relative paths, and a `<subcommand>.manifest.json`
/// describing each run, go to $AGCODES_OUT_DIR (default: the current directory).
#[derive(Debug, Parser)]
#[command(name = "agcodes", version)]
struct Cli {
    /// Worker threads for search and distance enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field size and reduction polynomial of GF(2^m), optionally the product table.
    FieldTable(FieldTableArgs),
    /// Projective points of a curve over GF(2^m).
    CountPoints(CurveArgs),
    /// Full report for a curve over GF(2^m) as JSON.
    AnalyzeCurve(AnalyzeArgs),
    /// Exhaustive search of plane curves of one degree up to GL3(F2).
    Search(SearchArgs),
    /// Best-curve table from one or more search result files.
    Tally(TallyArgs),
    /// Write a generator matrix.
    BuildCode(BuildCodeArgs),
    /// Exact minimum distance of a generator matrix by enumeration.
    MinDistance(MinDistanceArgs),
    /// Parameters of a code family.
    Params(ParamsArgs),
    /// Best pairs per target rate for the surface and product families.
    Compare(CompareArgs),
    /// Continuous rate optima at a relative distance and the gap between them.
    OptimalRate(OptimalRateArgs),
    /// Feasibility of codes on iterated blow-ups.
    BlowupCheck(BlowupArgs),
    /// Asymptotic bounds against relative distance.
    Bounds(BoundsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FieldTable(_) => "field-table",
            Command::CountPoints(_) => "count-points",
            Command::AnalyzeCurve(_) => "analyze-curve",
            Command::Search(_) => "search",
            Command::Tally(_) => "tally",
            Command::BuildCode(_) => "build-code",
            Command::MinDistance(_) => "min-distance",
            Command::Params(_) => "params",
            Command::Compare(_) => "compare",
            Command::OptimalRate(_) => "optimal-rate",
            Command::BlowupCheck(_) => "blowup-check",
            Command::Bounds(_) => "bounds",
        }
    }
}

#[derive(Debug, Args)]
struct FieldTableArgs {
    #[arg(long)]
    m: u32,
    /// Append the multiplication table (m <= 4).
    #[arg(long)]
    table: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// `d=<degree>; f=<polynomial>`, or a file with one curve per line.
    #[arg(long)]
    curve: String,
    #[arg(long)]
    m: u32,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Skip the absolute irreducibility test.
    #[arg(long)]
    no_irreducibility: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    degree: u32,
    /// Extension degrees, e.g. `3,4,5`.
    #[arg(long, value_delimiter = ',', required = true)]
    fields: Vec<u32>,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    #[arg(long)]
    tally: Option<PathBuf>,
    /// Checkpoint file: resumed from when present, updated as the run goes.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Stop after this many orbit representatives.
    #[arg(long)]
    max_reps: Option<u64>,
    /// Refuse fields GF(2^m) with m above this.
    #[arg(long, default_value_t = 11)]
    max_field_m: u32,
}

#[derive(Debug, Args)]
struct TallyArgs {
    /// Search result CSV files.
    #[arg(long, value_delimiter = ',', required = true)]
    results: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CodeFamily {
    /// Extended Reed-Solomon code of dimension k.
    ExtRs,
    /// Product of extended RS codes of dimensions a and b.
    Product,
    /// Bidegree (a, b) code on P1 x P1.
    Lomont1,
}

#[derive(Debug, Args)]
struct BuildCodeArgs {
    #[arg(long, value_enum)]
    family: CodeFamily,
    #[arg(long, conflicts_with = "m")]
    q: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, default_value = "G.csv")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MinDistanceArgs {
    #[arg(long = "gen")]
    generator: PathBuf,
    /// Largest number of codewords to enumerate, e.g. `2^24`.
    #[arg(long, default_value = "2^24")]
    limit: String,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParamFamily {
    Lomont1,
    Lomont2,
    Ruled,
    Decomposable,
    Goppa,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BundleArg {
    Generic,
    Decomposable,
    /// The indecomposable degree-0 bundle over an elliptic curve.
    Atiyah,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    #[arg(long, value_enum)]
    family: ParamFamily,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    e: Option<i64>,
    /// Genus of the base curve.
    #[arg(long)]
    g: Option<u64>,
    /// Rational points of the base curve.
    #[arg(long)]
    aleph: Option<u64>,
    #[arg(long)]
    k2: Option<u64>,
    #[arg(long, value_enum, default_value = "generic")]
    bundle: BundleArg,
    /// Use the ample divisor class instead of the nef threshold.
    #[arg(long)]
    ample: bool,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    aleph: Option<u64>,
    /// `0.1..0.9`, `0.1..0.9:0.05` or `0.1,0.5`.
    #[arg(long, default_value = "0.1..0.9")]
    targets: String,
    #[arg(long, value_delimiter = ',', default_value = "rs-product,lomont1,goppa-product,lomont2")]
    families: Vec<String>,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
    /// Add exact rational rate and distance columns.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OptimalRateArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    aleph: u64,
    /// Relative distance as a decimal.
    #[arg(long)]
    delta: String,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BlowupArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    h: u64,
    /// Points blown up per step; the last value repeats.
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<u64>,
    #[arg(long = "H0L0")]
    h0l0: u64,
    #[arg(long = "s0L0C0")]
    s0l0c0: u64,
    #[arg(long)]
    n0: u64,
    #[arg(long, default_value_t = 0)]
    lambda_max: u64,
    #[arg(long, default_value_t = 30)]
    steps: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value = "0.05..0.95:0.05")]
    delta: String,
    #[arg(long)]
    csv: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut r = run::Run::new(cli.command.name(), args)?;
    match &cli.command {
        Command::FieldTable(a) => commands::field_table(&mut r, a)?,
        Command::CountPoints(a) => commands::count_points_cmd(&mut r, a)?,
        Command::AnalyzeCurve(a) => commands::analyze_curve(&mut r, a)?,
        Command::Search(a) => commands::search(&mut r, a)?,
        Command::Tally(a) => commands::tally(&mut r, a)?,
        Command::BuildCode(a) => commands::build_code(&mut r, a)?,
        Command::MinDistance(a) => commands::min_distance(&mut r, a)?,
        Command::Params(a) => commands::params(&mut r, a)?,
        Command::Compare(a) => commands::compare(&mut r, a)?,
        Command::OptimalRate(a) => commands::optimal_rate(&mut r, a)?,
        Command::BlowupCheck(a) => commands::blowup_check(&mut r, a)?,
        Command::Bounds(a) => commands::bounds(&mut r, a)?,
    }
    r.finish()
}
