//! Verification harness: six numeric suites over the core geometry crate,
//! with deterministic JSON/CSV/SVG artifacts.

pub mod config;
pub mod plots;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use config::SuiteConfig;
use report::Check;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] rigidity_core::Error),
}

pub struct RunOutcome {
    pub checks: Vec<Check>,
    pub out_dir: PathBuf,
    pub all_pass: bool,
}

/// Load the config, run one suite on a worker pool, and write artifacts.
pub fn execute(
    suite: &str,
    config_path: &Path,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
    jobs: Option<usize>,
) -> Result<RunOutcome, CliError> {
    if !suites::SUITES.contains(&suite) {
        return Err(CliError::Usage(format!(
            "unknown suite `{suite}`; expected one of {}",
            suites::SUITES.join(" | ")
        )));
    }
    let mut cfg = SuiteConfig::from_path(config_path)?;
    if let Some(named) = &cfg.suite {
        if named != suite {
            return Err(CliError::Usage(format!(
                "config names suite `{named}` but `{suite}` was requested"
            )));
        }
    }
    if let Some(s) = seed_override {
        cfg.seed = Some(s);
    }
    let workers = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
        .max(1);

    let start = Instant::now();
    let checks = suites::run_suite(suite, &cfg, workers)?;
    let total = start.elapsed();

    let out_dir = out_override
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(suite));
    report::write_outputs(&out_dir, suite, cfg.seed, &checks, total)?;

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(RunOutcome { checks, out_dir, all_pass })
}
