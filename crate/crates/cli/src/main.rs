use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use casimir::asymptotics::asymptotic_report;
use casimir::lifshitz::force;
use casimir::stackspec::{format_number, parse_bytes};
use casimir::sweep::{format_e12, pressure_si, SweepError};
use casimir::{
    run_sweep, serialize, with_workers, write_csv, LifshitzError, Preset, QuadratureConfig,
    Scenario,
};
use clap::{Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir pressure between planar multilayer mirrors")]
struct Cli {
    /// Relative tolerance of every quadrature and of the Matsubara sum.
    #[arg(long, global = true, value_name = "REL")]
    tol: Option<f64>,
    /// Give up after this many Matsubara terms.
    #[arg(long, global = true, value_name = "N")]
    max_matsubara: Option<usize>,
    /// Reference frequency Ω in rad/s; adds SI pressures to the output.
    #[arg(long, global = true, value_name = "OMEGA")]
    omega_rad_s: Option<f64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Suppress informational messages.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pressure at one distance, printed as key=value lines.
    Force {
        scenario: PathBuf,
        /// Plate separation in units of c/Ω.
        #[arg(long, short)]
        d: f64,
        /// Temperature k_BT/ħΩ; overrides the scenario.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Pressure over the scenario's distance grid, as CSV.
    Sweep {
        scenario: PathBuf,
        /// Output file; one file per temperature when the scenario lists several.
        #[arg(long, short)]
        output: PathBuf,
        /// Single temperature k_BT/ħΩ; replaces the scenario's temperature list.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Hamaker constant, ideal-mirror limits and distance regime.
    Asympt {
        scenario: PathBuf,
        /// Plate separation in units of c/Ω.
        #[arg(long, short)]
        d: f64,
        /// Temperature k_BT/ħΩ; overrides the scenario.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Writes a named parameter set as a scenario file.
    Preset {
        name: String,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    parse_bytes(&bytes).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.kind),
        )
    })
}

fn config(cli: &Cli) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Failure::new(EXIT_USAGE, format!("--tol must lie in (0, 1), got {tol}")));
        }
        cfg.rel_tol = tol;
    }
    if let Some(n) = cli.max_matsubara {
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "--max-matsubara must be positive"));
        }
        cfg.max_matsubara = n;
    }
    Ok(cfg)
}

fn check_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_USAGE, format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_tau(tau: Option<f64>) -> Result<(), Failure> {
    match tau {
        Some(t) if !(t >= 0.0 && t.is_finite()) => Err(Failure::new(
            EXIT_USAGE,
            format!("--tau must be non-negative and finite, got {t}"),
        )),
        _ => Ok(()),
    }
}

fn physics(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_CONVERGENCE, e.to_string())
}

fn write_output(path: &Path, text: &[u8]) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

/// `out.csv` → `out_tau0.3.csv`.
fn tau_path(base: &Path, tau: f64) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_tau{}.{}", format_number(tau), ext.to_string_lossy()),
        None => format!("{stem}_tau{}", format_number(tau)),
    };
    base.with_file_name(name)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = config(cli)?;
    if let Some(omega) = cli.omega_rad_s {
        check_positive("--omega-rad-s", omega)?;
    }
    let stdout = io::stdout();
    match &cli.command {
        Command::Force { scenario, d, tau } => {
            check_positive("--d", *d)?;
            check_tau(*tau)?;
            let s = load(scenario)?;
            let cavity = s.cavity().map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let tau = tau.unwrap_or(s.temperature);
            let r = force(&cavity, *d, tau, &cfg).map_err(physics)?;
            let mut out = stdout.lock();
            let mut line = |k: &str, v: String| writeln!(out, "{k}={v}");
            let io = (|| -> io::Result<()> {
                line("d_over_c_by_omega", format_e12(*d))?;
                line("tau", format_e12(tau))?;
                line("pressure_norm", format_e12(r.pressure_norm))?;
                line("te_part", format_e12(r.te_part))?;
                line("tm_part", format_e12(r.tm_part))?;
                line("bound_lo", format_e12(r.bound_lo))?;
                line("bound_hi", format_e12(r.bound_hi))?;
                line("n_terms_used", r.n_terms_used.to_string())?;
                line("est_error", format_e12(r.est_error))?;
                if let Some(omega) = cli.omega_rad_s {
                    line("F_SI_Pa", format_e12(pressure_si(r.pressure_norm, *d, omega)))?;
                }
                Ok(())
            })();
            io.map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
        }
        Command::Sweep {
            scenario,
            output,
            tau,
        } => {
            check_tau(*tau)?;
            let s = load(scenario)?;
            let cavity = s.cavity().map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let distances = s.sweep.distances();
            let (temperatures, per_tau_files) = match tau {
                Some(t) => (vec![*t], false),
                None => (s.run_temperatures(), s.temperatures.is_some()),
            };
            for t in temperatures {
                let rows = run_sweep(&cavity, &distances, t, &cfg).map_err(|e| match e {
                    SweepError::Force {
                        source: LifshitzError::Domain { .. },
                        ..
                    } => Failure::new(EXIT_USAGE, e.to_string()),
                    other => physics(other),
                })?;
                let mut buf = Vec::new();
                write_csv(&mut buf, &rows, cli.omega_rad_s)
                    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
                let path = if per_tau_files {
                    tau_path(output, t)
                } else {
                    output.clone()
                };
                write_output(&path, &buf)?;
                if !cli.quiet {
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
            }
            Ok(())
        }
        Command::Asympt { scenario, d, tau } => {
            check_positive("--d", *d)?;
            check_tau(*tau)?;
            let s = load(scenario)?;
            let cavity = s.cavity().map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let tau = tau.unwrap_or(s.temperature);
            let rep = asymptotic_report(&cavity.mirror1, &cavity.mirror2, &cavity.gap, *d, tau)
                .map_err(physics)?;
            let mut text = String::new();
            match rep.c3_norm {
                Some(c3) => text.push_str(&format!("c3_norm={}\n", format_e12(c3))),
                None => text.push_str("c3_norm=unavailable\n"),
            }
            if let Some(note) = &rep.c3_note {
                text.push_str(&format!("note={note}\n"));
            }
            if let Some(c1) = rep.c1_norm {
                text.push_str(&format!("c1_norm={}\n", format_e12(c1)));
            }
            text.push_str(&format!("f_casimir={}\n", format_e12(rep.f_casimir)));
            text.push_str(&format!("f_thermal={}\n", format_e12(rep.f_thermal)));
            text.push_str(&format!(
                "f_thermal_lifshitz={}\n",
                format_e12(rep.f_thermal_lifshitz)
            ));
            text.push_str(&format!("lambda_T={}\n", format_e12(rep.lambda_t)));
            text.push_str(&format!("regime={}\n", rep.regime));
            stdout
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
        }
        Command::Preset { name, output } => {
            let which: Preset = name.parse().map_err(|e| {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                Failure::new(EXIT_USAGE, format!("{e}; expected one of {}", names.join(", ")))
            })?;
            let text = format!("# {which}\n{}", serialize(&Scenario::<f64>::from_preset(which)));
            match output {
                Some(path) => write_output(path, text.as_bytes()),
                None => stdout
                    .lock()
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.workers {
        Some(0) => Err(Failure::new(EXIT_USAGE, "--workers must be positive")),
        Some(n) => with_workers(n, || run(&cli)),
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("casimir: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
