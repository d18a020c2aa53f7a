//! `milne`: run scenarios and sample the individual models from the command line.
//!
//! Exit status: 0 on success, 1 for invalid input or usage, 2 when a run hit a solver or
//! singularity failure (partial outputs are still written).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use milne_core::environment::{
    bathymetry_profile, spectrum_sweep, BathymetrySpec, SurfaceSpectrumParams,
};
use milne_core::scenario::{
    bathymetry_csv, envelope_csv, envelope_series, load_config, run_scenario, spectrum_csv,
    write_outputs, ScenarioConfig,
};
use milne_core::solver::Status;
use milne_core::transition::{compare_forms, Matrix2};
use milne_core::Error;

#[derive(Parser)]
#[command(
    name = "milne",
    version,
    about = "Acoustic signal propagation through oscillator media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline of a scenario file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "milne-out")]
        out_dir: PathBuf,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample the sea-surface spectrum on a log-spaced wavenumber grid.
    Spectrum {
        #[arg(long)]
        wind_speed: f64,
        #[arg(long, default_value_t = 1e-3)]
        k_min: f64,
        #[arg(long, default_value_t = 10.0)]
        k_max: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a sine-hill seafloor profile.
    Bathymetry {
        #[arg(long)]
        zeta_max: f64,
        /// Hill spacing, m.
        #[arg(long)]
        lh: f64,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 1.0)]
        dx: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the signal envelope for given E_M and tau over the scenario's output grid.
    Envelope {
        #[arg(long)]
        em: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print both transition-matrix forms at one instant and their discrepancy.
    Transition {
        #[arg(long)]
        em: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Input(Error),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Singularity { .. } | Error::InsufficientData(_) | Error::NotComputed { .. } => {
                Failure::Runtime(e.to_string())
            }
            other => Failure::Input(other),
        }
    }
}

fn read_config(path: &Path) -> Result<ScenarioConfig, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_config(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn fmt_matrix(m: &Matrix2) -> String {
    let [a, b, c, d] = m.entries();
    format!("  [{a:>24.16e}, {b:>24.16e}]\n  [{c:>24.16e}, {d:>24.16e}]\n")
}

fn simulate(config: &Path, out_dir: &Path, seed: Option<u64>) -> Result<(), Failure> {
    let mut cfg = read_config(config)?;
    if let Some(seed) = seed {
        cfg = cfg.with_seed(seed);
    }
    let result = run_scenario(&cfg)?;
    let written = write_outputs(&result, out_dir)?;
    for path in &written {
        println!("wrote {}", path.display());
    }

    let mut problems = Vec::new();
    if let Some(report) = &result.solver {
        if report.status != Status::Completed {
            problems.push(format!(
                "solver {} (last finite t = {})",
                report.status,
                report
                    .last_finite_time
                    .map_or("none".into(), |t| t.to_string())
            ));
        }
    }
    for (kind, reason) in result.skipped() {
        problems.push(format!("{kind} skipped: {reason}"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(problems.join("; ")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate {
            config,
            out_dir,
            seed,
        } => simulate(&config, &out_dir, seed),
        Command::Spectrum {
            wind_speed,
            k_min,
            k_max,
            samples,
            out,
        } => {
            let params = SurfaceSpectrumParams::with_wind_speed(wind_speed);
            let issues = params.issues();
            if !issues.is_empty() {
                return Err(Error::Validation(issues).into());
            }
            let sweep = spectrum_sweep(&params, k_min, k_max, samples)?;
            Ok(emit(&spectrum_csv(&sweep), out.as_deref())?)
        }
        Command::Bathymetry {
            zeta_max,
            lh,
            length,
            dx,
            seed,
            out,
        } => {
            let spec = BathymetrySpec {
                zeta_max,
                hill_spacing: lh,
                length,
                dx,
                seed,
            };
            let profile = bathymetry_profile(&spec)?;
            Ok(emit(&bathymetry_csv(&profile), out.as_deref())?)
        }
        Command::Envelope {
            em,
            tau,
            config,
            t0,
            t1,
            out,
        } => {
            let mut cfg = read_config(&config)?;
            if t0.is_some() || t1.is_some() {
                let (c0, c1) = cfg.t_span();
                cfg = cfg.with_time_span(t0.unwrap_or(c0), t1.unwrap_or(c1))?;
            }
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::InvalidArgument(format!("tau = {tau} must be positive")).into());
            }
            let samples = envelope_series(em, tau, cfg.signal(), cfg.medium(), &cfg.output_grid())?;
            Ok(emit(&envelope_csv(&samples), out.as_deref())?)
        }
        Command::Transition {
            em,
            delta,
            tau,
            t,
            config,
        } => {
            let cfg = read_config(&config)?;
            let cmp = compare_forms(em, delta, tau, cfg.signal(), cfg.medium(), t)?;
            let text = format!(
                "composed:\n{}expanded:\n{}discrepancy: {:.16e}\n",
                fmt_matrix(&cmp.composed.matrix),
                fmt_matrix(&cmp.expanded.matrix),
                cmp.discrepancy
            );
            Ok(emit(&text, None)?)
        }
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
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
