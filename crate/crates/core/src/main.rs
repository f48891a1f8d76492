use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eddy_casimir::config::Config;
use eddy_casimir::figures::{self, Axis, FigureId, SweepPoint, SweepQuantity};
use eddy_casimir::validation;

/// Casimir interaction from eddy-current modes between metal plates.
///
/// Parallelism is capped by the EDDY_CASIMIR_THREADS environment variable.
#[derive(Parser)]
#[command(name = "eddy-casimir", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CSV dataset behind one of the four figures.
    Fig {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=4))]
        number: u32,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one quantity along one parameter axis.
    Sweep {
        /// energy, pressure, free_energy, thermal_free_energy, entropy,
        /// thermal_pressure, rho_tilde, rho_real, rho_full,
        /// lifshitz_free_energy or lifshitz_pressure.
        #[arg(long)]
        quantity: String,
        /// NAME:MIN:MAX:N with NAME one of L, T, xi, omega, gamma.
        /// Log-spaced when MIN > 0.
        #[arg(long)]
        axis: String,
        /// Fix another variable, e.g. --at L=10 --at T=1e-3.
        #[arg(long = "at")]
        fixed: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks; exits nonzero if any fails.
    Check {
        /// Run only these checks (1-12).
        #[arg(long)]
        only: Vec<u32>,
    },
}

fn load_config(path: Option<&Path>) -> eddy_casimir::Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> eddy_casimir::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("EDDY_CASIMIR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("EDDY_CASIMIR_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> eddy_casimir::Result<bool> {
    match cli.command {
        Command::Fig {
            number,
            config,
            out,
        } => {
            let config = load_config(config.as_deref())?;
            let data = figures::build(FigureId::from_number(number)?, &config)?;
            emit(&data.to_csv(), out.as_deref())?;
            let bad = data.unconverged();
            if bad > 0 {
                eprintln!("warning: {bad} points did not converge (converged = 0)");
            }
            Ok(true)
        }
        Command::Sweep {
            quantity,
            axis,
            fixed,
            config,
            out,
        } => {
            let config = load_config(config.as_deref())?;
            let quantity: SweepQuantity = quantity.parse()?;
            let axis: Axis = axis.parse()?;
            let mut at = SweepPoint::default();
            for f in &fixed {
                at.set(f)?;
            }
            let data = figures::sweep(quantity, &axis, &at, &config)?;
            emit(&data.to_csv(), out.as_deref())?;
            Ok(true)
        }
        Command::Check { only } => {
            let ids: Vec<u32> = if only.is_empty() {
                (1..=validation::CHECK_COUNT).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                let r = validation::run(id);
                println!("{}", r.line());
                all &= r.passed;
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
