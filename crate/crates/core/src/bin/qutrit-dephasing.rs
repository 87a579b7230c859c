use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qutrit_dephasing::experiments::{
    emit_csv, figure_preset, read_state_csv, run_scenario, write_csv, write_state_csv, ScenarioConfig,
};
use qutrit_dephasing::states::{horodecki_state, upb_state};
use qutrit_dephasing::witnesses::WitnessPair;
use qutrit_dephasing::Result;

#[derive(Parser)]
#[command(version, about = "Two-qutrit collective dephasing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateName {
    Horodecki,
    Upb,
}

#[derive(Subcommand)]
enum Command {
    /// Print a density matrix as CSV (9 rows, re/im interleaved)
    State {
        #[arg(value_enum)]
        name: StateName,
        /// Horodecki parameter in [2, 5]
        #[arg(long, default_value_t = 4.0)]
        a: f64,
    },
    /// Evaluate negativity and realignment witness of a state CSV
    Witness { path: PathBuf },
    /// Run a scenario config file
    Run {
        config: PathBuf,
        /// Output path; overrides `output_path`, `-` for stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a figure preset (fig1 .. fig8)
    Preset {
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; `-` for stdout
        #[arg(long)]
        out: Option<String>,
    },
}

fn write_result(cfg: &ScenarioConfig, out: Option<String>) -> Result<()> {
    let result = run_scenario(cfg)?;
    match out.or_else(|| cfg.output_path.clone()).as_deref() {
        None | Some("-") => write_csv(&result, io::stdout().lock()),
        Some(path) => {
            emit_csv(&result, path)?;
            eprintln!("wrote {} rows to {path}", result.rows.len());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::State { name, a } => {
            let rho = match name {
                StateName::Horodecki => horodecki_state(a)?,
                StateName::Upb => upb_state(),
            };
            write_state_csv(&rho, io::stdout().lock())
        }
        Command::Witness { path } => {
            let rho = read_state_csv(BufReader::new(std::fs::File::open(path)?))?;
            let w = WitnessPair::of(&rho)?;
            let mut out = io::stdout().lock();
            writeln!(out, "N = {:.16e}", w.negativity)?;
            writeln!(out, "R = {:.16e}", w.realignment)?;
            writeln!(out, "class = {}", w.class())?;
            Ok(())
        }
        Command::Run { config, out } => write_result(&ScenarioConfig::from_path(config)?, out),
        Command::Preset { name, seed, out } => {
            let mut cfg = figure_preset(&name)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            write_result(&cfg, out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
