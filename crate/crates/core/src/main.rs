use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use weylkit::levi::{decompose, normalize_levi};
use weylkit::report::{run_suite, Suite, SuiteOptions, RELWEYL_CAP};

#[derive(Parser)]
#[command(name = "weylkit", version, about = "Exact checks for type-D Levi data, relative Weyl groups and Clifford theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit decomposition of a standard Levi subgroup, as JSON.
    Decompose {
        #[arg(long)]
        rank: usize,
        /// comma-separated simple root indices, 1-based; may be empty
        #[arg(long, default_value = "")]
        delta: String,
    },
    /// Run a verification suite and emit a report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// worker threads; 0 lets rayon decide
        #[arg(long, env = "WEYLKIT_JOBS", default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// largest |W(B_l)| enumerated by the relweyl suite
        #[arg(long, default_value_t = RELWEYL_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 4)]
        max_orbits: usize,
        /// include wall times (makes the report run-dependent)
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Relations,
    Relweyl,
    Extend,
    Shadows,
    Table1,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Relations => Suite::Relations,
            SuiteArg::Relweyl => Suite::RelWeyl,
            SuiteArg::Extend => Suite::Extend,
            SuiteArg::Shadows => Suite::Shadows,
            SuiteArg::Table1 => Suite::Table1,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_delta(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad simple root index {t:?}")))
        .collect()
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().write_all(s.as_bytes());
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose { rank, delta } => {
            let delta = match parse_delta(&delta) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            match normalize_levi(rank, &delta) {
                Ok((levi, swapped)) => {
                    let mut json = decompose(&levi).to_json();
                    json["graph_swapped"] = swapped.into();
                    emit(&(serde_json::to_string_pretty(&json).expect("serializes") + "\n"));
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Verify { suite, rank, json: _, text, jobs, seed, out, cap, max_orbits, timings } => {
            if !(1..=weylkit::levi::MAX_RANK).contains(&rank) {
                return usage_error(format!("rank must lie in 1..={}", weylkit::levi::MAX_RANK));
            }
            if max_orbits == 0 || max_orbits > 6 {
                return usage_error("--max-orbits must lie in 1..=6");
            }
            if jobs > 0 {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
                    return usage_error(e);
                }
            }
            let opts = SuiteOptions { rank, seed, cap, max_orbits, timings, ..SuiteOptions::default() };
            let report = run_suite(suite.into(), &opts);
            let body = if text { report.to_text() } else { report.to_json() + "\n" };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, body) {
                        return usage_error(format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => emit(&body),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
