mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Options;

#[derive(Parser)]
#[command(name = "kpforge", version, about = "Spectral laboratory for endpoint fractional Leibniz inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate an inequality on a corpus; writes JSON lines and a summary CSV.
    Verify,
    /// Fourier coefficients of the localized power function, with a decay fit.
    Coeffs,
    /// Empirical Coifman-Meyer constants of a bilinear symbol.
    CmCheck,
    /// Residuals of the three-term and paraproduct splittings of D^s(fg).
    Decompose,
    /// Seeded search for large endpoint ratios.
    Search,
    /// Dump a corpus field to KPF1 or load and re-dump one.
    Field,
}

/// Failure classes with distinct exit codes.
pub enum Failure {
    Window(String),
    Other(String),
}

impl From<kpforge_core::Error> for Failure {
    fn from(e: kpforge_core::Error) -> Self {
        match e {
            kpforge_core::Error::ParameterWindow(_) => Failure::Window(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Other(e)
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("KPFORGE_THREADS") {
        let k: usize = v.trim().parse().map_err(|_| format!("KPFORGE_THREADS must be a positive integer, got '{v}'"))?;
        if k == 0 {
            return Err("KPFORGE_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut opts = cli.options;
    let mut run = || -> Result<(), Failure> {
        configure_threads()?;
        opts.load_config()?;
        match cli.command {
            Command::Verify => commands::verify(&opts),
            Command::Coeffs => commands::coeffs(&opts),
            Command::CmCheck => commands::cm_check(&opts),
            Command::Decompose => commands::decompose(&opts),
            Command::Search => commands::search(&opts),
            Command::Field => commands::field(&opts),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Window(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
