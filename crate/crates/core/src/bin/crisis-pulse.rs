use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crisis_pulse::pipeline::{Pipeline, PipelineError, RunConfig, Stage, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "crisis-pulse", version, about = "Disaster-period tweet analytics pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true, env = CONFIG_ENV, default_value = "crisis-pulse.toml")]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Parse input exports and keep records matching the manifest.
    Ingest,
    /// Deduplicate, normalize timestamps and tokenize.
    Clean,
    /// Per-tweet engineered features.
    Features,
    /// Fit the topic model.
    Topics,
    /// Classify tweet sentiment.
    Sentiment,
    /// Aggregate tables, charts and report.json.
    Report,
    /// Every stage in order.
    Run,
}

fn execute(cli: &Cli) -> Result<String, PipelineError> {
    let mut config = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    let pipeline = Pipeline::new(config)?;
    let stage = match cli.command {
        Command::Ingest => Stage::Ingest,
        Command::Clean => Stage::Clean,
        Command::Features => Stage::Features,
        Command::Topics => Stage::Topics,
        Command::Sentiment => Stage::Sentiment,
        Command::Report => Stage::Report,
        Command::Run => {
            let report = pipeline.run_all()?;
            return Ok(serde_json::to_string_pretty(&report).expect("report serializes"));
        }
    };
    let report = pipeline.run_stage(stage)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; 2 is kept for missing files
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
