use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use magnon_kerr::entanglement::symplectic_eigenvalues;
use magnon_kerr::experiments::{
    evaluate_point, load_config, render_report, run_sweep_with_workers, Directions, FigurePreset,
    ParamOverrides, Spacing, SweepSpec, SweepVariable, DEFAULT_COUNT,
};
use magnon_kerr::model::{build_diffusion, build_drift};
use magnon_kerr::steady_state::{check_stability, lyapunov_residual, solve_lyapunov};
use magnon_kerr::{Error, Result, SystemParams};

/// Steady-state entanglement and its nonreciprocity in Kerr cavity-magnon optomechanics.
///
/// Rates, couplings and detunings are in units of the mechanical frequency.
#[derive(Debug, Parser)]
#[command(name = "magnon-kerr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Flat TOML file of parameter values; flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: ParamOverrides,
}

impl ParamArgs {
    fn resolve(&self, base: &SystemParams) -> Result<SystemParams> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => ParamOverrides::default(),
        };
        let params = file.overridden_by(&self.overrides).apply(base);
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate both field directions at one parameter point
    Point {
        #[command(flatten)]
        params: ParamArgs,
        /// Emit JSON instead of key = value text
        #[arg(long)]
        json: bool,
    },
    /// Sweep Delta_m, K or T and write CSV
    Sweep {
        /// Swept variable: Delta_m, K or T
        #[arg(long)]
        var: SweepVariable,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        /// both, positive or negative
        #[arg(long, default_value = "both")]
        directions: Directions,
        /// Force logarithmic (or linear, with --linear) grid spacing
        #[arg(long, conflicts_with = "linear")]
        log: bool,
        #[arg(long)]
        linear: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        /// Output CSV path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a figure preset sweep and write CSV
    Figure {
        /// fig2, fig3, fig4a, fig4b, fig4c or fig4d
        name: FigurePreset,
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability and physicality diagnostics for the given (signed) parameters
    Check {
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn write_output(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| Error::Io(e.to_string()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

fn sweep_to_csv(spec: &SweepSpec, workers: Option<usize>, out: Option<&Path>) -> Result<()> {
    let result = run_sweep_with_workers(spec, workers)?;
    for row in &result.rows {
        if let Some(e) = &row.error {
            eprintln!(
                "warning: {} = {}: {e}",
                spec.variable.column_name(),
                row.value
            );
        }
    }
    write_output(out, |w| result.write_csv(w))
}

fn check(params: &SystemParams) -> Result<()> {
    let a = build_drift(params);
    let verdict = check_stability(&a)?;
    println!("K = {}", params.kerr);
    println!("stable = {}", verdict.stable);
    println!("spectral_abscissa = {:e}", verdict.spectral_abscissa);
    if !verdict.stable {
        return Err(Error::Unstable {
            abscissa: verdict.spectral_abscissa,
        });
    }
    let d = build_diffusion(params);
    let v = solve_lyapunov(&a, &d)?;
    let residual = lyapunov_residual(&a, &v, &d);
    let margin = v.physicality_margin();
    let nu = symplectic_eigenvalues(&v.to_dmatrix())?;
    println!("lyapunov_residual = {residual:e}");
    println!("physicality_margin = {margin:e}");
    println!("symplectic_eigenvalues = {nu:?}");
    let physical = margin >= -1e-9 && nu.iter().all(|&x| x >= 0.5 - 1e-9);
    println!("physical = {physical}");
    if !physical || residual >= 1e-10 {
        return Err(Error::NumericalFailure(
            "diagnostics out of tolerance".into(),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Point { params, json } => {
            let p = params.resolve(&SystemParams::default())?;
            let report = evaluate_point(&p)?;
            if json {
                let text = serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Io(format!("serializing report: {e}")))?;
                println!("{text}");
            } else {
                print!("{}", render_report(&report));
            }
            Ok(())
        }
        Command::Sweep {
            var,
            start,
            stop,
            count,
            directions,
            log,
            linear,
            workers,
            params,
            out,
        } => {
            let base = params.resolve(&SystemParams::default())?;
            let mut spec = SweepSpec::new(var, start, stop, count, base);
            spec.directions = directions;
            if log {
                spec.spacing = Spacing::Logarithmic;
            } else if linear {
                spec.spacing = Spacing::Linear;
            }
            sweep_to_csv(&spec, workers, out.as_deref())
        }
        Command::Figure {
            name,
            count,
            workers,
            out,
        } => {
            let mut spec = name.spec();
            spec.count = count;
            sweep_to_csv(&spec, workers, out.as_deref())
        }
        Command::Check { params } => check(&params.resolve(&SystemParams::default())?),
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
