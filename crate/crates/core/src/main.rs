use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multiholo::cli::{cmd_canonicalize, cmd_oracle, cmd_report, cmd_verify, RunConfig};
use multiholo::pigroup::CaseLabel;

#[derive(Debug, Parser)]
#[command(name = "multiholo")]
#[command(about = "Exact T(G) = NHol(G)/Hol(G) computations for special p-groups built from \
linear maps into the exterior square")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Built-in family: a, b, c, d, e, zero3, zero4, n2
    #[arg(long)]
    case: Option<String>,
    /// Path to a custom map: first line `p n`, then n rows of C(n,2) entries
    #[arg(long)]
    custom: Option<PathBuf>,
    /// Odd prime modulus
    #[arg(long, default_value_t = 5)]
    prime: u64,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Compute cases (a), (c), (e) below p = 5, outside their stated hypotheses
    #[arg(long)]
    allow_small_p: bool,
    /// Cap on exhaustive enumeration sizes
    #[arg(long, default_value_t = multiholo::DEFAULT_BUDGET)]
    budget: u128,
    /// Worker threads for the verification suites (env MULTIHOLO_WORKERS)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Commands {
    /// Compute T(G) for one family or a custom map and compare with the
    /// known classification
    Report(CommonArgs),
    /// Run a named verification suite: group, autc, forms, holo, oracle, all
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Brute-force holomorph count at order p^3, independent of the pipeline
    Oracle(CommonArgs),
    /// Bring a rank-one custom map to its catalog form
    Canonicalize(CommonArgs),
}

fn build_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let case = match &args.case {
        Some(text) => Some(CaseLabel::parse(text).map_err(|e| e.to_string())?),
        None => None,
    };
    let custom_text = match &args.custom {
        Some(path) => {
            Some(std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?)
        }
        None => None,
    };
    let workers = args
        .workers
        .or_else(|| std::env::var("MULTIHOLO_WORKERS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1);
    Ok(RunConfig {
        case,
        custom_text,
        prime: args.prime,
        json: args.json,
        allow_small_p: args.allow_small_p,
        budget: args.budget,
        workers,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, runner): (&CommonArgs, Box<dyn Fn(&RunConfig) -> (i32, String)>) =
        match &cli.command {
            Commands::Report(args) => (args, Box::new(cmd_report)),
            Commands::Verify { suite, common } => {
                let suite = suite.clone();
                (common, Box::new(move |cfg| cmd_verify(cfg, &suite)))
            }
            Commands::Oracle(args) => (args, Box::new(cmd_oracle)),
            Commands::Canonicalize(args) => (args, Box::new(cmd_canonicalize)),
        };
    let config = match build_config(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(multiholo::cli::EXIT_INVALID as u8);
        }
    };
    let (code, output) = runner(&config);
    print!("{output}");
    ExitCode::from(code as u8)
}
