use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use planarhopf_cli::config::parse_alphabet;
use planarhopf_cli::{eval, run_suite, Format, Session};

#[derive(Parser)]
#[command(name = "planarhopf", version, about = "Exact algebra on decorated planar rooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression such as `mkw({a b[c,d]})`.
    Eval {
        expr: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = Format::Json)]
        format: Format,
        /// π normalisation: eulerian or leftbracket.
        #[arg(long)]
        pi: Option<String>,
        /// Comma-separated letters for the coactions.
        #[arg(long)]
        alphabet: Option<String>,
        /// Componentwise cap on edge increments for Δ⁺₀.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Run a named suite of laws and worked examples.
    Suite {
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
}

fn session(path: Option<&PathBuf>) -> anyhow::Result<Session> {
    Ok(match path {
        Some(p) => Session::load(p)?,
        None => Session::default(),
    })
}

fn run() -> anyhow::Result<bool> {
    if let Ok(n) = std::env::var("PLANARHOPF_THREADS") {
        let n: usize = n.parse().context("PLANARHOPF_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match Cli::parse().command {
        Command::Eval { expr, config, format, pi, alphabet, cap } => {
            let mut s = session(config.as_ref())?;
            if let Some(p) = pi {
                s.norm = p.parse().map_err(anyhow::Error::msg)?;
            }
            if let Some(a) = alphabet {
                s.alphabet = parse_alphabet(&a);
            }
            if let Some(c) = cap {
                s.cap = c;
            }
            let v = eval(&expr, &s)?;
            emit(&v.render(format))?;
            Ok(true)
        }
        Command::Suite { name, config, seed, format } => {
            let s = session(config.as_ref())?;
            let report = run_suite(&name, s.norm, seed)?;
            emit(&report.render(format))?;
            Ok(report.passed())
        }
    }
}

// a closed pipe (e.g. `| head`) is not an error
fn emit(text: &str) -> anyhow::Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
