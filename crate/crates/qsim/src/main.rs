use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsim_core::particle::SplitMode;
use qsim_core::runner::{
    self, convergence_sweep, format_scaling_table, gate_census, load_problem, scaling_table, EXIT_OK, EXIT_OTHER,
    EXIT_TOLERANCE,
};
use qsim_core::Error;

#[derive(Parser)]
#[command(name = "qsim", version, about = "State-vector emulator for spin and grid-particle dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a problem and write the JSON report.
    Run {
        config: PathBuf,
        /// Report path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Override the sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Convergence study against the dense oracle at dt, dt/2, ...
    Sweep {
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        halvings: u32,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Predicted vs measured operation counts.
    Census {
        config: PathBuf,
        /// Also print the k = 4..8, N = 1..2 scaling table.
        #[arg(long)]
        scaling: bool,
    },
    /// Parse and validate a problem file without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(runner::exit_code(&e) as u8)
        }
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<i32, Error> {
    match command {
        Command::Run {
            config,
            out,
            csv,
            seed,
        } => {
            let mut loaded = load_problem(&config)?;
            if let Some(seed) = seed {
                loaded.plan.seed = seed;
            }
            let report = runner::run(&loaded)?;
            write_or_print(out.as_ref(), &report.to_json()?)?;
            if let Some(csv) = csv {
                std::fs::write(csv, report.trajectory_csv())?;
            }
            for c in &report.checks {
                eprintln!(
                    "{} {}: {:e} (threshold {:e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                );
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_TOLERANCE })
        }
        Command::Sweep {
            config,
            halvings,
            json,
        } => {
            let report = convergence_sweep(&load_problem(&config)?, halvings)?;
            if json {
                println!("{}", report.to_json()?);
            } else {
                print!("{}", report.to_table());
            }
            Ok(EXIT_OK)
        }
        Command::Census { config, scaling } => {
            let loaded = load_problem(&config)?;
            let census = gate_census(&loaded)?;
            println!("{}", census.to_json()?);
            if scaling {
                let rows = scaling_table(1..=2, 4..=8, SplitMode::Lie, loaded.cap)?;
                print!("{}", format_scaling_table(&rows));
            }
            Ok(if census.matches { EXIT_OK } else { EXIT_OTHER })
        }
        Command::Validate { config } => {
            let loaded = load_problem(&config)?;
            println!(
                "ok: {:?} problem, {} qubits, {} steps",
                loaded.problem.problem_type(),
                loaded.problem.num_qubits(),
                loaded.plan.steps()?
            );
            Ok(EXIT_OK)
        }
    }
}
