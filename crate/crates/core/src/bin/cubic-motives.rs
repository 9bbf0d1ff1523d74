use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cubic_motives::config::{GramSource, RunConfig};
use cubic_motives::error::ConfigError;
use cubic_motives::suites::{self, Context, SuiteReport};

#[derive(Parser)]
#[command(version, about = "Run exact verification suites and write JSON and markdown reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path; `.json` and `.md` are appended.
    #[arg(long, global = true, default_value = "report")]
    out: PathBuf,
    /// Seed for randomized suites.
    #[arg(long, alias = "random-seed", global = true)]
    seed: Option<u64>,
    /// Primitive Gram matrix: `default`, `random`, or a JSON file.
    #[arg(long, global = true, default_value = "default")]
    gram: String,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    Chern,
    MukaiTable,
    Projectors,
    DeriveP,
    Kernels,
    Witt,
    Gamma,
    GammaK3,
    /// Every suite, including the Euler consistency check.
    All,
}

impl Command {
    fn suites(self) -> Vec<&'static str> {
        match self {
            Command::Chern => vec!["chern"],
            Command::MukaiTable => vec!["mukai-table"],
            Command::Projectors => vec!["projectors"],
            Command::DeriveP => vec!["derive-p"],
            Command::Kernels => vec!["kernels"],
            Command::Witt => vec!["witt"],
            Command::Gamma => vec!["gamma"],
            Command::GammaK3 => vec!["gamma-k3"],
            Command::All => suites::SUITES.to_vec(),
        }
    }
}

fn context(cli: &Cli) -> Result<Context, ConfigError> {
    let mut run = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        run.seed = s;
    }
    Context::new(run, GramSource::from_arg(&cli.gram)?)
}

fn write_reports(out: &Path, reports: &[SuiteReport]) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(reports).expect("reports serialize");
    std::fs::write(out.with_extension("json"), json)?;
    let md: String = reports.iter().map(SuiteReport::markdown).collect::<Vec<_>>().join("\n");
    std::fs::write(out.with_extension("md"), md)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match context(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut reports = Vec::new();
    for name in cli.command.suites() {
        match suites::run_suite(name, &ctx) {
            Ok(r) => {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                println!("{status} {name} ({} checks, {:.2}s)", r.checks.len(), r.seconds);
                for c in r.checks.iter().filter(|c| !c.passed) {
                    println!("  FAIL {}: {}", c.id, c.witness.as_deref().unwrap_or(""));
                }
                reports.push(r);
            }
            Err(e) => {
                eprintln!("{name}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    if let Err(e) = write_reports(&cli.out, &reports) {
        eprintln!("cannot write reports: {e}");
        return ExitCode::from(1);
    }
    if reports.iter().all(SuiteReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
