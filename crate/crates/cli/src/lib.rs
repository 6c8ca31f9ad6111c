//! Experiment driver: strict configs in, reproducible CSV/JSON reports out.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run_command, CliError, RunOptions};
pub use config::{config_hash, CommandName, ExperimentConfig, Format, OutputSpec};
pub use report::{write_report, Header, Report};

/// Result of a run: rendered bytes plus the process exit code.
pub struct Outcome {
    pub header: Header,
    pub report: Report,
    pub exit_code: u8,
}

pub fn execute(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let (resolved, report) = run_command(cfg, opts)?;
    let header = Header::new(cfg.command, config_hash(cfg.command, &resolved));
    let exit_code = if report.failure.is_some() { 1 } else { 0 };
    Ok(Outcome { header, report, exit_code })
}

pub fn render(outcome: &Outcome, format: Format) -> Vec<u8> {
    let mut buf = Vec::new();
    write_report(&mut buf, &outcome.header, &outcome.report, format).expect("in-memory write");
    buf
}
