//! Command-line runs of the bifurcation pipeline.
//!
//! Every subcommand reads an optional TOML config, lets flags override it,
//! and writes a JSON report and CSV tables. See `FORMATS.md` for the file
//! layouts and the exit-code contract.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, EXIT_OK, EXIT_VIOLATION};
use crate::output::Report;

#[derive(Debug, Parser)]
#[command(name = "lcbif", version, about = "Bifurcation analysis of the biaxial nematic free energy")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files; without it the report goes to stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// RNG seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Euler-angle quadrature points per angle for entropy coefficients.
    #[arg(long, global = true)]
    pub quadrature_grid: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Molien series of one of the symmetry groups.
    Molien {
        /// d3, d3tilde, d3xd3, left-d3 or so3.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Hilbert basis values, syzygy and invariance at seeded random points.
    Invariants {
        #[arg(long)]
        points: Option<usize>,
    },
    /// Entropy expansion coefficients by quadrature.
    EntropyCoeffs,
    /// Stability of the isotropic state for the configured model.
    Classify,
    /// Critical points of the full free energy on R^4.
    Solve4d,
    /// Coefficients of the reduced function on the kernel.
    Reduce,
    /// Critical points of the planar normal form.
    Solve,
    /// Swallowtail and bluebird sections and their contacts.
    Bifset,
    /// Critical-point counts over a grid of (e2, e3).
    Census,
    /// One-parameter sweep with branch table and event list.
    Sweep {
        #[arg(long)]
        parameter: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Finite determinacy of an invariant jet, or the seven-case suite.
    Determinacy {
        /// Terms `a,b,c` of c·X^a·Y^b separated by `;`.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        window: Option<u32>,
    },
    /// Versality of an unfolding.
    Versal {
        #[arg(long)]
        poly: Option<String>,
        /// Unfolding monomials `a,b` separated by `;`.
        #[arg(long)]
        monomials: Option<String>,
        #[arg(long)]
        window: Option<u32>,
    },
    /// Rank of sampled conjugation operators and the explicit identity.
    Spanning {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Point clouds and a gnuplot script for the region and path figures.
    Figdata,
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let grid = cli.quadrature_grid.unwrap_or(cfg.quadrature.grid);
    match &cli.command {
        Command::Molien { group, max_degree } => {
            let t = cfg.molien.clone();
            let group = group.clone().or(t.as_ref().and_then(|t| t.group.clone())).unwrap_or_else(|| "d3tilde".into());
            let max_degree = max_degree.or(t.and_then(|t| t.max_degree)).unwrap_or(12);
            commands::molien(&commands::MolienArgs { group, max_degree })
        }
        Command::Invariants { points } => {
            let points = points.or(cfg.invariants.and_then(|t| t.points)).unwrap_or(100);
            commands::invariants(points, seed)
        }
        Command::EntropyCoeffs => commands::entropy_coeffs(grid),
        Command::Classify => commands::classify(cfg),
        Command::Solve4d => commands::solve4d(cfg, grid),
        Command::Reduce => commands::reduce(cfg, grid),
        Command::Solve => commands::solve(cfg, grid),
        Command::Bifset => commands::bifset(cfg, grid),
        Command::Census => commands::census(cfg, grid),
        Command::Sweep { parameter, from, to, steps } => {
            let mut cfg = cfg.clone();
            let mut s = cfg.sweep.take().unwrap_or(config::SweepTable {
                parameter: "e2".into(),
                from: f64::NAN,
                to: f64::NAN,
                steps: 400,
                tol: 1e-10,
            });
            if let Some(p) = parameter {
                s.parameter = p.clone();
            }
            s.from = from.unwrap_or(s.from);
            s.to = to.unwrap_or(s.to);
            s.steps = steps.unwrap_or(s.steps);
            if !s.from.is_finite() || !s.to.is_finite() {
                return Err(CliError::Usage("sweep needs --from/--to or a [sweep] table".into()));
            }
            cfg.sweep = Some(s);
            commands::sweep(&cfg, grid)
        }
        Command::Determinacy { poly, k, window } => {
            let t = cfg.determinacy.clone();
            let poly = poly.clone().or(t.as_ref().and_then(|t| t.poly.clone()));
            let k = k.or(t.as_ref().and_then(|t| t.k));
            let window = window.or(t.and_then(|t| t.window)).unwrap_or(singtools::CASE_WINDOW);
            commands::determinacy(poly.as_deref(), k, window)
        }
        Command::Versal { poly, monomials, window } => {
            let t = cfg.versal.clone();
            let poly = poly.clone().or(t.as_ref().and_then(|t| t.poly.clone()));
            let monomials = monomials.clone().or(t.as_ref().and_then(|t| t.monomials.clone()));
            let window = window.or(t.and_then(|t| t.window)).unwrap_or(10);
            commands::versal(poly.as_deref(), monomials.as_deref(), window)
        }
        Command::Spanning { samples } => {
            let samples = samples.or(cfg.spanning.and_then(|t| t.samples)).unwrap_or(30);
            commands::spanning(samples, seed)
        }
        Command::Figdata => unreachable!("handled by run"),
    }
}

fn run_inner(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?.0,
        None => RunConfig::default(),
    };
    let dir = cli.out.clone().or(cfg.output.dir.clone());
    let format = cli.format.or(cfg.output.format).unwrap_or_default();
    if let Command::Figdata = cli.command {
        let dir = dir.ok_or_else(|| CliError::Usage("figdata needs --out or [output] dir".into()))?;
        let (rep, script) = commands::figdata(&cfg)?;
        rep.emit(Some(&dir), Format::Both, out)?;
        std::fs::write(dir.join(format!("{}.gp", rep.file_stem())), script)?;
        return Ok(rep.ok());
    }
    let rep = dispatch(cli, &cfg)?;
    rep.emit(dir.as_deref(), format, out)?;
    Ok(rep.ok())
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(cli, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(err, "lcbif: one or more checks failed; see the report");
            EXIT_VIOLATION
        }
        Err(e) => {
            let _ = writeln!(err, "lcbif: {e}");
            e.exit_code()
        }
    }
}
