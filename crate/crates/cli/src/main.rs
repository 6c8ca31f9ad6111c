use clap::{Parser, Subcommand};
use gs_dynamics_cli::{execute, render, CliError, CommandName, ExperimentConfig, Format, RunOptions};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gs-dynamics", version, about = "Experiments on iterated polynomial composition operators")]
struct Cli {
    /// Experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Mantissa bits for high-precision recurrences
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: usize,
    /// Worker threads; results do not depend on it
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run whatever command the config names
    Run,
    /// Print a config with default parameters
    DefaultConfig {
        #[arg(value_enum)]
        command: CommandName,
    },
    VerifyLemmas,
    Iterate,
    BoundCert,
    DerivativeBounds,
    SeminormSweep,
    Cesaro,
    Neumann,
    DivergenceCert,
    WeightCheck,
}

impl Cmd {
    fn name(&self) -> Option<CommandName> {
        Some(match self {
            Cmd::Run | Cmd::DefaultConfig { .. } => return None,
            Cmd::VerifyLemmas => CommandName::VerifyLemmas,
            Cmd::Iterate => CommandName::Iterate,
            Cmd::BoundCert => CommandName::BoundCert,
            Cmd::DerivativeBounds => CommandName::DerivativeBounds,
            Cmd::SeminormSweep => CommandName::SeminormSweep,
            Cmd::Cesaro => CommandName::Cesaro,
            Cmd::Neumann => CommandName::Neumann,
            Cmd::DivergenceCert => CommandName::DivergenceCert,
            Cmd::WeightCheck => CommandName::WeightCheck,
        })
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    ExperimentConfig::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let from_file = cli.config.as_deref().map(load).transpose()?;
    match (cli.command.name(), from_file) {
        (None, Some(cfg)) => Ok(cfg),
        (None, None) => Err(CliError::Config("`run` needs --config".into())),
        (Some(name), Some(cfg)) if cfg.command != name => Err(CliError::Config(format!(
            "config is for `{}`, not `{name}`",
            cfg.command
        ))),
        (Some(_), Some(cfg)) => Ok(cfg),
        (Some(name), None) => Ok(ExperimentConfig::new(name)),
    }
}

fn real_main(cli: Cli) -> Result<u8, CliError> {
    if let Cmd::DefaultConfig { command } = cli.command {
        let mut cfg = ExperimentConfig::new(command);
        cfg.params = gs_dynamics_cli::commands::default_params(command);
        println!("{}", cfg.to_json());
        return Ok(0);
    }
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let cfg = resolve(&cli)?;
    let out_path = cli.out.clone().or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()).map(PathBuf::from));
    let format = cli
        .format
        .or_else(|| cfg.output.as_ref().map(|o| o.format))
        .or_else(|| out_path.as_ref().filter(|p| p.extension().is_some_and(|e| e == "json")).map(|_| Format::Json))
        .unwrap_or_default();
    let outcome = execute(&cfg, &RunOptions { precision_bits: cli.precision_bits })?;
    let bytes = render(&outcome, format);
    match out_path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    if let Some(f) = &outcome.report.failure {
        eprintln!("verification failed: {f}");
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
