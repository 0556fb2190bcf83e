//! Command-line front end: single solves, sweeps, figure reproduction and
//! stability checks.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use omm_core::gaussian::{analyze, check_stability};
use omm_core::linalg::eigenvalues;
use omm_core::sweep::{reproduce_figure, write_table, Axis, SweepSpec};
use omm_core::{LinearModel, PhysicalParams};

use omm_cli::config::parse_config;
use omm_cli::error::CliError;

/// Steady-state entanglement of a cascaded pair of optomagnomechanical systems.
///
/// Config files are TOML with sections [system1], [system2], [cascade],
/// [environment] and optionally [drive]. Frequencies, rates and couplings are
/// given in Hz and multiplied by 2π internally; append `_rad` to a key to give
/// rad/s instead.
#[derive(Parser)]
#[command(name = "omm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and write its entanglement record.
    Solve {
        config: PathBuf,
        /// Output file for the key=value record (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one or two parameters over a linear grid and write a CSV table.
    Sweep {
        config: PathBuf,
        /// `<param>=<start>:<stop>:<n>`, e.g. `delta_m_eff=-8e7:0:201` (Hz).
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute a figure (`fig2`..`fig7`) or a single panel (`fig2a`).
    Reproduce {
        figure: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the drift-matrix eigenvalues and the stability verdict.
    Stability { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn workers() -> Result<Option<usize>, CliError> {
    match std::env::var("OMM_WORKERS") {
        Err(_) => Ok(None),
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Workers(text)),
        },
    }
}

fn load(path: &Path) -> Result<PhysicalParams, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|source| CliError::Config {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { config, out } => solve(&config, out.as_deref()),
        Command::Sweep { config, axes, out } => sweep(&config, &axes, &out),
        Command::Reproduce { figure, out } => {
            for path in reproduce_figure(&figure, &out, workers()?)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Stability { config } => stability(&config),
    }
}

fn solve(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let params = load(config)?;
    let (report, steady) = analyze(&params)?;
    let mut text = String::new();
    for (key, value) in report.records() {
        writeln!(text, "{key}={value}").unwrap();
    }
    if let Some(s) = &steady {
        writeln!(text, "lyapunov_residual={:e}", s.residual).unwrap();
        writeln!(text, "min_symplectic_eigenvalue={}", s.min_symplectic).unwrap();
    }
    emit(&text, out)?;
    if report.stable {
        Ok(())
    } else {
        Err(CliError::Physics(format!(
            "system is not stable (margin {:e} rad/s)",
            report.stability_margin
        )))
    }
}

fn sweep(config: &Path, axes: &[String], out: &Path) -> Result<(), CliError> {
    let base = load(config)?;
    let axes = axes
        .iter()
        .map(|a| Axis::parse(a))
        .collect::<Result<Vec<_>, _>>()?;
    let name = config
        .file_stem()
        .map_or("sweep".into(), |s| s.to_string_lossy());
    let mut spec = SweepSpec::new(&name, base, axes);
    spec.workers = workers()?;
    let table = omm_core::run_sweep(&spec)?;
    write_table(&table, out)?;
    for (row, message) in &table.failures {
        eprintln!("warning: row {row}: {message}");
    }
    if table.all_unstable {
        return Err(CliError::Physics("no grid point is stable".into()));
    }
    Ok(())
}

fn stability(config: &Path) -> Result<(), CliError> {
    let params = load(config)?;
    let model = LinearModel::assemble(&params)?;
    let spectrum = eigenvalues(&model.drift)?.sorted();
    let verdict = check_stability(&model.drift)?;
    let mut text = String::from("# eigenvalues of the drift matrix (rad/s): re im\n");
    for z in spectrum.values() {
        writeln!(text, "{:e} {:e}", z.re, z.im).unwrap();
    }
    writeln!(text, "stable={}", u8::from(verdict.stable)).unwrap();
    writeln!(text, "stability_margin={}", verdict.margin).unwrap();
    emit(&text, None)?;
    if verdict.stable {
        Ok(())
    } else {
        Err(CliError::Physics("drift matrix is not stable".into()))
    }
}
