//! `rmtsense` — random-matrix spectrum sensing from the command line.
//!
//! Subcommands: `spectrum` (eigenvalue clouds of snapshot pipelines), `laws`
//! (tabulate theoretical densities), `detect` (single-capture LRT decision),
//! `distributed` (multi-server detection rounds from a scenario config),
//! `mobility` (inner-radius time series), `selftest` (oracle identities).
//!
//! Exit codes: 0 success (or noise-only for `detect`), 1 detection-positive
//! (`detect` only), 2 runtime error, 64 usage error. Only the declared
//! artifact (JSON or CSV) is written to stdout; diagnostics go to stderr.

mod commands;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rmtsense", version, about = "Random-matrix spectrum sensing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutDir {
    /// Directory for emitted CSV files (default: $RMTSENSE_OUT_DIR or ".").
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl OutDir {
    fn resolve(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os("RMTSENSE_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a snapshot pipeline and emit scatter, radial histogram and the
    /// matching theoretical curve.
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Tabulate a spectral law as a curve file.
    Laws(commands::laws::LawsArgs),
    /// Single-capture LRT detection; prints a JSON report.
    Detect(commands::detect::DetectArgs),
    /// Run a distributed detection scenario from a JSON config.
    Distributed(commands::distributed::DistributedArgs),
    /// Track the ring-law inner radius over a stream of ensembles.
    Mobility(commands::mobility::MobilityArgs),
    /// Run the built-in oracle identities and report pass/fail.
    Selftest(commands::selftest::SelftestArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            // help/version go to stderr so stdout stays artifact-only
            eprint!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(64);
        }
    };
    let outcome = match cli.command {
        Command::Spectrum(a) => commands::spectrum::run(&a),
        Command::Laws(a) => commands::laws::run(&a),
        Command::Detect(a) => commands::detect::run(&a),
        Command::Distributed(a) => commands::distributed::run(&a),
        Command::Mobility(a) => commands::mobility::run(&a),
        Command::Selftest(a) => commands::selftest::run(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rmtsense: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
