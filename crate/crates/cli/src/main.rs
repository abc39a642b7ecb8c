use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermoqubit_cli::commands::{cmd_sweep_fidelity, cmd_sweep_mandel, cmd_wigner_grid};
use thermoqubit_cli::config::{RawSettings, SweepConfig};
use thermoqubit_cli::output::{fmt_sci, to_pretty_json, write_text};
use thermoqubit_cli::verify::run_verify;
use thermoqubit_cli::{init_thread_pool, CliError};

#[derive(Parser)]
#[command(
    name = "thermoqubit",
    version,
    about = "Thermofield dynamics of a two-qubit bosonic encoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity against the pure state over an n_bar sweep.
    SweepFidelity(Shared),
    /// Mandel Q parameter over an n_bar sweep.
    SweepMandel(Shared),
    /// Wigner function grids with a JSON metadata sidecar.
    WignerGrid(Shared),
    /// Run every cross-check and print a JSON report.
    Verify(Shared),
}

#[derive(Args)]
struct Shared {
    /// Amplitudes x,y,z,w, or eight values as re,im pairs.
    #[arg(long, allow_hyphen_values = true)]
    amps: Option<String>,
    /// Sweep as start:end:steps (inclusive).
    #[arg(long = "nbar-range")]
    nbar_range: Option<String>,
    /// Single mean thermal occupation.
    #[arg(long)]
    nbar: Option<String>,
    /// Fock cutoff, or `auto`.
    #[arg(long)]
    cutoff: Option<String>,
    /// Truncation tail tolerance.
    #[arg(long = "tail-tol")]
    tail_tol: Option<String>,
    /// Grid as qmin:qmax:nq,pmin:pmax:np.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output path (stdout when omitted, except for wigner-grid).
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// key=value settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Shared {
    fn resolve(self) -> Result<SweepConfig, CliError> {
        let file = match &self.config {
            Some(path) => RawSettings::parse_file(path)?,
            None => RawSettings::default(),
        };
        let mut flags = RawSettings::default();
        flags.set("amps", self.amps);
        flags.set("nbar-range", self.nbar_range);
        flags.set("nbar", self.nbar);
        flags.set("cutoff", self.cutoff);
        flags.set("tail-tol", self.tail_tol);
        flags.set("grid", self.grid);
        flags.set("out", self.out);
        flags.set("format", self.format);
        let cfg = SweepConfig::from_settings(&file.overlay(flags))?;
        if cfg.needs_normalize_warning() {
            eprintln!(
                "warning: amplitudes had squared norm {}; normalized",
                fmt_sci(cfg.input_norm_sqr)
            );
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    match cli.command {
        Command::SweepFidelity(s) => cmd_sweep_fidelity(&s.resolve()?),
        Command::SweepMandel(s) => cmd_sweep_mandel(&s.resolve()?),
        Command::WignerGrid(s) => {
            for path in cmd_wigner_grid(&s.resolve()?)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Verify(s) => {
            let cfg = s.resolve()?;
            let report = run_verify(&cfg.amps, cfg.tail_tol);
            write_text(cfg.out.as_deref(), &to_pretty_json(&report.to_json()))?;
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<String> = report.failures().iter().map(|c| c.label()).collect();
                Err(CliError::Check(names.join(", ")))
            }
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
