use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dispersive_lab::experiment::{
    emit_report, run_experiment, ConfigFile, ExperimentConfig, ExperimentKind, OutputFormat,
};

/// Experiments on fractional Schrödinger maximal functions along time
/// sequences.
///
/// Exit status: 0 when every checked result is within its bound, 1 when a
/// check fails or a run aborts, 2 on configuration errors.
#[derive(Parser)]
#[command(name = "dispersive-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a random band-limited function to time `t`.
    Propagate(Common),
    /// Maximal profile along a sequence on the grid.
    Maximal(Common),
    /// Growth exponent of frequency-localized maximal ratios.
    Scaling(Common),
    /// Narrow-window counterexample schedule and weak constants.
    Counterexample(Common),
    /// Critical exponent, convexity and Lorentz quasinorm of a sequence.
    Classify(Common),
    /// Three-piece envelope decomposition over random functions.
    Decompose(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// TOML file with experiment parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Random seed, overriding the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Propagate(c) => (ExperimentKind::Propagate, c),
        Command::Maximal(c) => (ExperimentKind::Maximal, c),
        Command::Scaling(c) => (ExperimentKind::Scaling, c),
        Command::Counterexample(c) => (ExperimentKind::Counterexample, c),
        Command::Classify(c) => (ExperimentKind::Classify, c),
        Command::Decompose(c) => (ExperimentKind::Decompose, c),
    };

    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let file = match &args.config {
        Some(p) => match ConfigFile::load(p) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ConfigFile::default(),
    };
    let cfg = match ExperimentConfig::resolve(kind, file, args.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {kind} failed: {e}");
            return ExitCode::from(1);
        }
    };
    let format = match args.format {
        Format::Csv => OutputFormat::Csv,
        Format::Text => OutputFormat::Text,
    };
    match emit_report(&report, format, &args.out) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    for (stage, secs) in &report.timings {
        eprintln!("time {stage}: {secs:.3}s");
    }
    for s in report.scalars.iter().filter(|s| !s.pass) {
        eprintln!(
            "check failed: {} = {} (bound {} {})",
            s.key,
            s.value,
            s.relation.map(|r| r.symbol()).unwrap_or(""),
            s.bound.unwrap_or(f64::NAN)
        );
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
