use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use sirnet_cli::commands::{apply_overrides, cmd_analyze, cmd_figures, cmd_simulate, cmd_sweep};
use sirnet_cli::scenario::Scenario;

/// Coverage and device-to-device throughput for Poisson cellular networks.
#[derive(Parser)]
#[command(name = "sirnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Built-in scenario name (fig1, fig3, fig4, fig5).
    scenario: Option<String>,
    /// Scenario configuration file (TOML); exclusive with a built-in name.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Simulation seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Simulation trial-count override.
    #[arg(long)]
    trials: Option<u64>,
    /// Activity-grid resolution override.
    #[arg(long)]
    grid: Option<usize>,
    /// Output path override.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print propagation constants, candidate optima and the operating point.
    Analyze(ScenarioArgs),
    /// Write the throughput sweep CSV.
    Sweep(ScenarioArgs),
    /// Run the Monte Carlo verification pipeline and write its CSV.
    Simulate(ScenarioArgs),
    /// Run every built-in scenario and write one CSV per figure.
    Figures {
        /// Output directory.
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        /// Activity-grid resolution override.
        #[arg(long)]
        grid: Option<usize>,
    },
}

fn load_scenario(args: &ScenarioArgs) -> Result<Scenario> {
    let mut scenario = match (&args.scenario, &args.config) {
        (Some(_), Some(_)) => bail!("give either a built-in scenario name or --config, not both"),
        (Some(name), None) => Scenario::builtin(name).ok_or_else(|| {
            anyhow::anyhow!(
                "unknown scenario {name:?}; built-ins are {}",
                Scenario::builtin_names().join(", ")
            )
        })?,
        (None, Some(path)) => Scenario::from_path(path)?,
        (None, None) => bail!("missing scenario: give a built-in name or --config PATH"),
    };
    apply_overrides(
        &mut scenario,
        args.seed,
        args.trials,
        args.grid,
        args.out.as_deref(),
    )?;
    Ok(scenario)
}

fn output_path(scenario: &Scenario, suffix: &str) -> PathBuf {
    match &scenario.out {
        Some(path) => PathBuf::from(path),
        None => PathBuf::from(format!("{}-{suffix}.csv", scenario.name)),
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze(args) => {
            let scenario = load_scenario(&args)?;
            cmd_analyze(&scenario, &mut out)?;
            Ok(true)
        }
        Command::Sweep(args) => {
            let scenario = load_scenario(&args)?;
            let path = output_path(&scenario, "sweep");
            cmd_sweep(&scenario, &path)?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(true)
        }
        Command::Simulate(args) => {
            let scenario = load_scenario(&args)?;
            let path = output_path(&scenario, "simulate");
            let outcome = cmd_simulate(&scenario, &path)?;
            for check in &outcome.checks {
                writeln!(
                    out,
                    "{:28} analytic {:.6} mc {:.6} +- {:.6} z {:+.2}{}",
                    check.quantity,
                    check.analytic,
                    check.mc_mean,
                    check.mc_stderr,
                    check.z,
                    if check.flagged() { "  [FLAGGED]" } else { "" }
                )?;
            }
            writeln!(out, "wrote {}", path.display())?;
            writeln!(out, "{}", outcome.summary())?;
            Ok(outcome.passed())
        }
        Command::Figures { out: dir, grid } => {
            cmd_figures(&dir, grid, &mut out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
