//! `knotflow`: invariants of braid closures, grid scans over K(n,m), and
//! orbit-knot runs of volume-preserving flows.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit codes: 0 success, 2 usage, 3 validation failure, 4 numerical ambiguity.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: 2, error: e.into() }
    }

    pub fn validation(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: 3, error: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Failure {
        Failure { code: 1, error }
    }
}

pub type CmdResult = Result<u8, Failure>;

#[derive(Parser, Debug)]
#[command(name = "knotflow", version, about = "Linear saddle invariants of braid families and flow-orbit knots")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of one braid closure, as JSON on stdout.
    Inv(InvArgs),
    /// Scan an additive invariant over the K(n,m) grid.
    Scan(ScanArgs),
    /// Run the orbit-knot pipeline described by a config file.
    Flow(FlowArgs),
    /// Braid a diagram given as JSON (Vogel moves), as JSON on stdout.
    Braid(BraidArgs),
}

#[derive(Args, Debug)]
pub struct BraidInput {
    /// Braid word, e.g. "1 -2 1".
    #[arg(long, conflicts_with = "family", requires = "strands")]
    pub braid: Option<String>,
    #[arg(long)]
    pub strands: Option<usize>,
    /// `torus N P` or `knm N M`.
    #[arg(long, num_args = 3, value_names = ["KIND", "A", "B"])]
    pub family: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct InvArgs {
    #[command(flatten)]
    pub input: BraidInput,
    /// Classical signature.
    #[arg(long)]
    pub sig: bool,
    /// ω-signature at θ = P/Q; repeatable.
    #[arg(long, value_name = "P/Q")]
    pub omega: Vec<String>,
    /// Slice genus (exact for positive braids, an upper bound otherwise).
    #[arg(long)]
    pub gstar: bool,
    /// Determinant |det(V + Vᵀ)|.
    #[arg(long)]
    pub det: bool,
    /// Include the Seifert matrix.
    #[arg(long)]
    pub seifert: bool,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("invariant").required(true).multiple(false).args(["sig", "omega", "gstar"])))]
pub struct ScanArgs {
    #[arg(long)]
    pub sig: bool,
    #[arg(long, value_name = "P/Q")]
    pub omega: Option<String>,
    #[arg(long)]
    pub gstar: bool,
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    /// Defaults to `--nmax`.
    #[arg(long)]
    pub mmax: Option<usize>,
    /// Directory for scan.csv and summary.json; the summary also goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for manifest.json, run.json and flow.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the seed from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write plot.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args, Debug)]
pub struct BraidArgs {
    /// Diagram JSON file.
    #[arg(long)]
    pub diagram: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("KNOTFLOW_LOG")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    if let Err(e) = pool.build_global() {
        log::warn!("thread pool: {e}");
    }
    let result = match cli.command {
        Command::Inv(a) => commands::inv(&a),
        Command::Scan(a) => commands::scan(&a),
        Command::Flow(a) => commands::flow(&a),
        Command::Braid(a) => commands::braid(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
