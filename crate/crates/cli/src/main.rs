//! Command-line front end: `fan` (triangulation and skeleton report),
//! `periods` (the limiting-period pipeline), and `verify` (the numeric
//! cross-check suites).
//!
//! Exit codes: 0 success / all checks pass; 1 the query answered "no"
//! (e.g. `fan` on a non-triangulation weight) or a check failed; 2 input or
//! computation errors, with machine-readable codes on stderr.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gkz_periods::problem::{fan_report, table_to_csv, table_to_json, ProblemDescription};
use gkz_periods::Error;

mod verify;

#[derive(Parser)]
#[command(name = "gkz-periods", about, version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// working precision in bits
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    /// truncation depth (kernel steps per direction)
    #[arg(long, global = true)]
    truncation: Option<i64>,
    /// numeric tolerance for certificates
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    /// seed for randomized property suites
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// thread count (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Triangulation, skeleton verdict and cone data for the arc weights
    Fan {
        /// problem description JSON (file path, or - for stdin)
        input: PathBuf,
    },
    /// Full limiting-period pipeline
    Periods {
        input: PathBuf,
        /// output format
        #[arg(long, default_value = "json")]
        emit: String,
        /// output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verification suites: combinatorics, gkz, mb, fermat, polygamma, all
    Verify {
        /// suite selector
        suite: String,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // rayon pool size is fixed per process; the library tolerates any
        std::env::set_var("RAYON_NUM_THREADS", cli.threads.to_string());
    }
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let tag = match &e {
                Error::SkeletonHit(_) => "SKELETON_HIT",
                Error::UnsupportedTriangulation(_) => "UNSUPPORTED_TRIANGULATION",
                Error::LimitNotFound(_) => "LIMIT_NOT_FOUND",
                Error::Pole(_) => "POLE",
                Error::Malformed(_) => "MALFORMED",
                Error::Unbounded(_) => "UNBOUNDED",
                Error::InsufficientTruncation(_) => "INSUFFICIENT_TRUNCATION",
                Error::Numeric(_) => "NUMERIC",
                Error::Internal(_) => "INTERNAL",
            };
            eprintln!("{{\"error\": \"{tag}\", \"message\": \"{e}\"}}");
            2
        }
    };
    std::process::exit(code);
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path:?}: {e}")))
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Fan { input } => {
            let text = read_input(input)?;
            let p = ProblemDescription::parse(&text)?;
            let a = p.matrix()?;
            let arc = p.degeneration_arc()?;
            let report = fan_report(&a, &arc.weight())?;
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(if report.is_triangulation { 0 } else { 1 })
        }
        Command::Periods { input, emit, out } => {
            let text = read_input(input)?;
            let p = ProblemDescription::parse(&text)?;
            let a = p.matrix()?;
            let arc = p.degeneration_arc()?;
            let mut opts = p.table_options();
            if let Some(t) = cli.truncation {
                opts.depth = t;
            }
            if cli.precision != 128 {
                opts.precision = cli.precision;
            }
            if cli.tolerance != 1e-10 {
                opts.tolerance = cli.tolerance;
            }
            let table = gkz_periods::limit::limiting_period_table(
                &a,
                &arc,
                &p.parameter_vectors(),
                &opts,
            )?;
            let rendered = match emit.as_str() {
                "json" => serde_json::to_string_pretty(&table_to_json(&table)).unwrap(),
                "csv" => table_to_csv(&table),
                other => {
                    return Err(Error::Malformed(format!("unknown emit format {other}")))
                }
            };
            match out {
                Some(path) => std::fs::write(path, rendered)
                    .map_err(|e| Error::Malformed(format!("{path:?}: {e}")))?,
                None => println!("{rendered}"),
            }
            Ok(0)
        }
        Command::Verify { suite } => verify::run_suite(suite, cli.seed, cli.precision),
    }
}
