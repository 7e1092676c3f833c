use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use composite_probe_cli::{
    commands, write_report, CliError, CliResult, FigureRegistry, RunOptions, Scenario,
};

#[derive(Parser)]
#[command(
    name = "composite-probe",
    version,
    about = "Signal design and volume-fraction recovery for two-phase composites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file, or the name of a built-in scenario (example1, example2, example3).
    #[arg(long, global = true)]
    scenario: Option<String>,

    /// Directory for output files; without it the primary output goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write an SVG plot for every table (needs --out).
    #[arg(long, global = true)]
    svg: bool,

    /// Number of lambda grid points for bound scans.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the trajectory and report poles, zeros and flags.
    Verify,
    /// Synthesize the input signal for the scenario's design.
    Design,
    /// Simulate the response to the scenario's measure.
    Simulate,
    /// Bound the response over measures meeting the scenario's constraints.
    Bounds,
    /// Recover the targeted quantity from measurements.
    Recover,
    /// Reproduce a reference figure (fig2b, fig3b, fig4a, fig4b, fig6a, fig6b, fig8a, fig8b).
    Reproduce { figure: String },
}

fn run(cli: Cli) -> CliResult<()> {
    let opts = RunOptions {
        grid: cli.grid,
        tol: cli.tol,
    };
    if cli.svg && cli.out.is_none() {
        return Err(CliError::Config("--svg needs --out".into()));
    }
    let scenario = || -> CliResult<Scenario> {
        let arg = cli
            .scenario
            .as_deref()
            .ok_or_else(|| CliError::Config("this command needs --scenario".into()))?;
        Scenario::load(arg)
    };
    let report = match &cli.command {
        Command::Verify => commands::verify(&scenario()?, &opts)?,
        Command::Design => commands::design(&scenario()?, &opts)?,
        Command::Simulate => commands::simulate(&scenario()?, &opts)?,
        Command::Bounds => commands::bounds(&scenario()?, &opts)?,
        Command::Recover => commands::recover(&scenario()?, &opts)?,
        Command::Reproduce { figure } => {
            commands::reproduce(&FigureRegistry::with_builtins(), figure, &opts)?
        }
    };
    match &cli.out {
        Some(dir) => {
            print!("{}", report.summary);
            for path in write_report(&report, dir, cli.svg)? {
                println!("wrote {}", path.display());
            }
        }
        None => {
            if matches!(cli.command, Command::Verify) {
                print!("{}", report.summary);
            } else {
                eprint!("{}", report.summary);
                if let Some(a) = report.artifacts.first() {
                    print!("{}", a.contents());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
