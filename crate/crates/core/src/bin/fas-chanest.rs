use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fas_chanest::harness::{
    emit, inspect_trial, preset, read_config, run_experiment, DetectorMode, ExperimentSpec, Format,
};
use fas_chanest::Error;

#[derive(Parser)]
#[command(version, about = "Sparse FAS channel estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo experiment and write aggregate rows.
    Run(Common),
    /// Check every sweep point of an experiment without running it.
    Validate(Common),
    /// Dump diagnostics of one trial as JSON.
    Inspect {
        #[command(flatten)]
        common: Common,
        /// Trial index within the first sweep point.
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in experiment: fig1, fig2, fig3, fig3-slope, smoke.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Flat key = value experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// threshold:ALPHA or known-l.
    #[arg(long)]
    detector: Option<DetectorMode>,
    /// Worker threads.
    #[arg(long)]
    parallel: Option<usize>,
}

impl Common {
    fn spec(&self) -> Result<ExperimentSpec, Error> {
        let mut spec = match (&self.preset, &self.config) {
            (Some(name), _) => preset(name)?,
            (None, Some(path)) => read_config(path)?,
            (None, None) => unreachable!("clap requires --preset or --config"),
        };
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(s) = self.seed {
            spec.base.seed = s;
        }
        if let Some(d) = self.detector {
            spec.detector = d;
        }
        spec.threads = self.parallel;
        spec.output_path = self.out.clone();
        Ok(spec)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parse { .. } | Error::UnknownPreset(_) | Error::Experiment(_) => 2,
        _ => 1,
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(common) => {
            let spec = common.spec()?;
            spec.points()?;
            let rows = run_experiment(&spec)?;
            let path = spec
                .output_path
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.{}", spec.name, match common.format {
                    Format::Csv => "csv",
                    Format::Json => "json",
                })));
            emit(&rows, common.format, &path)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        Command::Validate(common) => {
            let spec = common.spec()?;
            let points = spec.points()?;
            println!("{}: {} sweep points valid", spec.name, points.len());
        }
        Command::Inspect { common, trial } => {
            let spec = common.spec()?;
            let detail = inspect_trial(&spec, trial)?;
            let text = serde_json::to_string_pretty(&detail).map_err(|source| Error::Json {
                path: spec.output_path.clone().unwrap_or_default(),
                source,
            })?;
            write_or_print(&text, spec.output_path.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
