use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rigidity_lab::{execute, CliError};

/// Numeric verification suites for warped-product rigidity checks.
#[derive(Parser)]
#[command(name = "rigidity-lab", version, disable_help_subcommand = true)]
struct Cli {
    /// suite to run: clifford-check | warped | killing | smooth-polytope |
    /// sl-residual | tracenorm
    suite: String,
    /// TOML configuration file
    #[arg(long)]
    config: PathBuf,
    /// RNG seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// output directory (default: out/<suite>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads (default: logical cores)
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.suite, &cli.config, cli.seed, cli.out, cli.jobs) {
        Ok(outcome) => {
            for check in &outcome.checks {
                let status = if check.pass { "pass" } else { "FAIL" };
                println!(
                    "{status}  {:<40} measured {:>12.3e}  tol {:>9.1e}",
                    check.id, check.measured, check.tolerance
                );
                if !check.pass && !check.note.is_empty() {
                    println!("      note: {}", check.note);
                }
            }
            println!("artifacts: {}", outcome.out_dir.display());
            if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (CliError::Usage(_) | CliError::Config(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
