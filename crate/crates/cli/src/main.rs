use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermocoll_cli::output::write_file;
use thermocoll_cli::{execute, CliError, Experiment, ExperimentConfig, Result};

/// Collision-model thermalization experiments.
#[derive(Parser)]
#[command(name = "thermocoll", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity heatmap over ancilla gap and collision count for a two-level system.
    Sweep(Common),
    /// Two-site Ising chain under sequential and simultaneous collisions.
    Ising2(Common),
    /// XY chain with Dzyaloshinskii-Moriya interaction from several initial states.
    Xy(Common),
    /// Transition decomposition and fixed-point uniqueness report.
    Analyze(Common),
    /// Trace distance between the collision engine and the master equation.
    Crosscheck(Common),
}

#[derive(Args)]
struct Common {
    /// TOML file layered over the experiment's defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; defaults to the config's `output` or `<experiment>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG figure here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads for parallel runs.
    #[arg(long)]
    threads: Option<usize>,
    /// `section.key=value`, applied after the config file. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print the fully resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn run(experiment: Experiment, args: Common) -> Result<()> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be ≥ 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start thread pool: {e}")))?;
    }
    let cfg = ExperimentConfig::load(experiment, args.config.as_deref(), &args.overrides)?;
    if args.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(());
    }
    let (main, figure) = execute(&cfg)?;
    let out = args.out.unwrap_or_else(|| cfg.output_path());
    write_file(&out, &main)?;
    if experiment == Experiment::Analyze {
        print!("{main}");
    } else if experiment == Experiment::Crosscheck {
        let max = main.lines().skip(1).filter_map(|l| l.split(',').nth(1)?.parse::<f64>().ok()).fold(0.0, f64::max);
        println!("max trace distance: {max}");
    }
    if let (Some(path), Some(svg)) = (args.svg, figure) {
        write_file(&path, &svg)?;
    }
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Sweep(a) => (Experiment::Sweep, a),
        Command::Ising2(a) => (Experiment::Ising2, a),
        Command::Xy(a) => (Experiment::Xy, a),
        Command::Analyze(a) => (Experiment::Analyze, a),
        Command::Crosscheck(a) => (Experiment::Crosscheck, a),
    };
    match run(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
