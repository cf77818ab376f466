//! Command-line front end for `mzclock`: config parsing, single runs,
//! parameter sweeps, planning and classification reports.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error,
//! 3 physics-domain error, 4 unknown catalog system.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{RunConfig, SweepDirective, SweepVariable};
pub use error::CliError;
pub use output::Format;

use crate::commands::PlanTarget;
use crate::units::{parse_quantity, Dimension};

#[derive(Debug, Parser)]
#[command(
    name = "mzclock",
    version,
    about = "Interferometry of particles carrying an internal clock"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// text, csv or json.
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detection probabilities, visibility and which-path information for one configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluates a configuration over a range of one variable.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// delta_T, delta_h, phi or omega; overrides sweep_variable in the config.
        #[arg(long)]
        variable: Option<String>,
        /// Start value, SI units of the variable unless a unit is given.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Number of samples, endpoints included.
        #[arg(long)]
        n: Option<usize>,
        /// Add a column with the brute-force oracle's visibility.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Required arm separation times hold time for a system to lose visibility.
    Plan {
        /// Catalog system name; all systems when omitted together with --omega.
        system: Option<String>,
        /// Clock angular frequency (rad/s) instead of a catalog system.
        #[arg(long, conflicts_with = "system")]
        omega: Option<String>,
        /// Achieved dh*dT (m*s) for --omega.
        #[arg(long, requires = "omega")]
        achieved: Option<String>,
        /// Extra or replacement catalog entries.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Gravitational acceleration.
        #[arg(long, default_value = "10 m/s^2")]
        g: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Interprets a measured visibility against the predicted one.
    Classify {
        /// Measured visibility.
        #[arg(allow_negative_numbers = true)]
        measured: f64,
        /// Predicted visibility.
        #[arg(allow_negative_numbers = true)]
        predicted: f64,
        /// Visibility measurement error, used as the equality band.
        #[arg(allow_negative_numbers = true)]
        visibility_error: f64,
        /// Proper-time split (s) used for the width bound.
        #[arg(default_value = "0 s", allow_hyphen_values = true)]
        delta_tau: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orthogonalization time of the configured clock and its moment bounds.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        /// Moment orders.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        alpha: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Quantity given on the command line; a bare number is taken in `dim`'s SI unit.
fn cli_quantity(text: &str, dim: Dimension, name: &str) -> Result<f64, CliError> {
    let t = text.trim();
    if t.parse::<f64>().is_ok() {
        parse_quantity(&format!("{t} {}", dim.si_unit()), dim, name)
    } else {
        parse_quantity(t, dim, name)
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn sweep_directive(
    cfg: &RunConfig,
    variable: Option<&str>,
    from: Option<&str>,
    to: Option<&str>,
    n: Option<usize>,
) -> Result<SweepDirective, CliError> {
    let base = cfg.sweep;
    let variable = match (variable, &base) {
        (Some(v), _) => v.parse()?,
        (None, Some(b)) => b.variable,
        (None, None) => return Err(CliError::Parse("no sweep variable: pass --variable".into())),
    };
    let inherited = base.filter(|b| b.variable == variable);
    let dim = variable.dimension();
    let pick = |given: Option<&str>, fallback: Option<f64>, name: &str| -> Result<f64, CliError> {
        match (given, fallback) {
            (Some(t), _) => cli_quantity(t, dim, name),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(CliError::Parse(format!("missing --{name}"))),
        }
    };
    let from = pick(from, inherited.map(|b| b.from), "from")?;
    let to = pick(to, inherited.map(|b| b.to), "to")?;
    let n = n
        .or(inherited.map(|b| b.points))
        .ok_or_else(|| CliError::Parse("missing --n".into()))?;
    SweepDirective::new(variable, from, to, n)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let text = commands::simulate(&cfg, out.format.unwrap_or(Format::Text))?;
            emit(&text, out.output.as_deref())
        }
        Command::Sweep {
            config,
            variable,
            from,
            to,
            n,
            verify,
            out,
        } => {
            let cfg = RunConfig::load(&config)?;
            let dir =
                sweep_directive(&cfg, variable.as_deref(), from.as_deref(), to.as_deref(), n)?;
            let format = match out.format.unwrap_or(Format::Csv) {
                Format::Text => Format::Csv,
                f => f,
            };
            match out.output {
                Some(path) => {
                    // written beside the target and moved into place on success
                    let partial = path.with_extension("partial");
                    let result = (|| {
                        let mut w = BufWriter::new(File::create(&partial)?);
                        commands::sweep(&cfg, &dir, verify, format, &mut w)?;
                        w.flush()?;
                        Ok::<_, CliError>(())
                    })();
                    match result {
                        Ok(()) => Ok(std::fs::rename(&partial, &path)?),
                        Err(e) => {
                            let _ = std::fs::remove_file(&partial);
                            Err(e)
                        }
                    }
                }
                None => {
                    let mut w = BufWriter::new(io::stdout().lock());
                    commands::sweep(&cfg, &dir, verify, format, &mut w)?;
                    Ok(w.flush()?)
                }
            }
        }
        Command::Plan {
            system,
            omega,
            achieved,
            catalog,
            g,
            out,
        } => {
            let catalog = catalog::load_catalog(catalog.as_deref())?;
            let g = cli_quantity(&g, Dimension::Acceleration, "g")?;
            let target = match (&system, omega) {
                (Some(name), _) => PlanTarget::System(name),
                (None, Some(w)) => PlanTarget::Omega {
                    omega: cli_quantity(&w, Dimension::AngularFrequency, "omega")?,
                    achieved: achieved
                        .map(|a| cli_quantity(&a, Dimension::LengthTime, "achieved"))
                        .transpose()?,
                },
                (None, None) => PlanTarget::All,
            };
            let text = commands::plan(&catalog, target, g, out.format.unwrap_or(Format::Text))?;
            emit(&text, out.output.as_deref())
        }
        Command::Classify {
            measured,
            predicted,
            visibility_error,
            delta_tau,
            out,
        } => {
            let tau = cli_quantity(&delta_tau, Dimension::Time, "delta_tau")?;
            let text = commands::classify(
                measured,
                predicted,
                visibility_error,
                tau,
                out.format.unwrap_or(Format::Text),
            )?;
            emit(&text, out.output.as_deref())
        }
        Command::Bounds { config, alpha, out } => {
            let cfg = RunConfig::load(&config)?;
            let text = commands::bounds(&cfg, &alpha, out.format.unwrap_or(Format::Text))?;
            emit(&text, out.output.as_deref())
        }
    }
}
