use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand};
use formsums_cli::config::{BoundMode, CommandKind, ExperimentConfig, Format, HSpec};
use formsums_cli::output::{render, write_dir, Summary};
use formsums_cli::{run, RunError};

/// Root counts, discriminants, fixed-prime-divisor removal and sums of
/// multiplicative functions over values of binary forms.
///
/// Forms are written `d; a0 a1 ... ad` for a0 x1^d + a1 x1^(d-1) x2 + ... + ad x2^d.
/// Polynomials are written as coefficients from the constant term up, e.g. `0 -1 0 1` for x^3 - x.
///
/// Exit status: 0 when every assertion holds, 1 when an assertion fails or a
/// mathematical precondition is violated, 2 for configuration or I/O errors.
#[derive(Parser, Debug)]
#[command(name = "formsums", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant of a form or polynomial.
    Disc(Options),
    /// Split F = x1^d1 x2^d2 G and report the degrees and Delta_F.
    Shape(Options),
    /// Number of roots of a polynomial modulo each modulus.
    Rho(Options),
    /// Density of coprime pairs on which a form vanishes modulo each modulus.
    Rhostar(Options),
    /// Check the prime-power root bound for all p <= max-p, p^l <= max-modulus.
    DanCheck(Options),
    /// Fixed prime divisors of a polynomial with their p, q, r decomposition.
    Fpd(Options),
    /// Remove fixed prime divisors, writing and verifying a certificate.
    Reduce(Options),
    /// Re-verify a certificate produced by `reduce`.
    VerifyCert(Options),
    /// Sums over a square grid X1 = X2 = X (form) or 1..X (polynomial).
    Sum(Options),
    /// Compare the polynomial sum with its Euler-product upper bound.
    NairCheck(Options),
    /// Euler-product factors of the form bound.
    EulerProduct(Options),
    /// Compare form sums with the upper bound (modes: euler, log, fix-n2).
    BoundCheck(Options),
}

impl Command {
    fn split(self) -> (CommandKind, Options) {
        use Command::*;
        match self {
            Disc(o) => (CommandKind::Disc, o),
            Shape(o) => (CommandKind::Shape, o),
            Rho(o) => (CommandKind::Rho, o),
            Rhostar(o) => (CommandKind::Rhostar, o),
            DanCheck(o) => (CommandKind::DanCheck, o),
            Fpd(o) => (CommandKind::Fpd, o),
            Reduce(o) => (CommandKind::Reduce, o),
            VerifyCert(o) => (CommandKind::VerifyCert, o),
            Sum(o) => (CommandKind::Sum, o),
            NairCheck(o) => (CommandKind::NairCheck, o),
            EulerProduct(o) => (CommandKind::EulerProduct, o),
            BoundCheck(o) => (CommandKind::BoundCheck, o),
        }
    }
}

/// Flags overlay values read from `--config`.
#[derive(Args, Debug)]
struct Options {
    /// Experiment file (TOML, or JSON when it ends in .json).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for artifacts and summary.json; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Binary form, e.g. "3; 1 0 0 2".
    #[arg(long)]
    form: Option<String>,
    /// Polynomial coefficients, constant term first, e.g. "1 0 1" for x^2 + 1.
    #[arg(long)]
    poly: Option<String>,
    /// Moduli, comma separated.
    #[arg(long = "modulus", value_delimiter = ',')]
    moduli: Vec<u64>,
    #[arg(long)]
    max_p: Option<u64>,
    #[arg(long)]
    max_modulus: Option<u64>,
    /// Restrict `reduce` to one prime.
    #[arg(long)]
    prime: Option<u64>,
    /// Certificate JSON for `verify-cert`.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Built-in multiplicative function: tau, one or two_pow_omega.
    #[arg(long)]
    h: Option<String>,
    /// Grid of X values, comma separated and increasing.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<u64>,
    /// Sum over the symmetric range of the form.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, value_enum)]
    mode: Option<BoundMode>,
    /// Largest allowed max/min ratio, as an exact rational.
    #[arg(long)]
    threshold: Option<String>,
    /// Decimal digits for non-rational quantities.
    #[arg(long)]
    digits: Option<u32>,
}

fn build_config(kind: CommandKind, o: Options) -> anyhow::Result<ExperimentConfig> {
    let mut c = match &o.config {
        Some(path) => {
            let c = ExperimentConfig::load(path)?;
            if c.command != kind {
                bail!("config is for `{}`, not `{}`", c.command.name(), kind.name());
            }
            c
        }
        None => ExperimentConfig::new(kind),
    };
    macro_rules! overlay {
        ($($field:ident),*) => { $( if o.$field.is_some() { c.$field = o.$field.clone(); } )* };
    }
    overlay!(out, jobs, format, form, poly, max_p, max_modulus, prime, certificate, threshold, digits, mode);
    if !o.moduli.is_empty() {
        c.moduli = o.moduli;
    }
    if !o.grid.is_empty() {
        c.grid = o.grid;
    }
    if let Some(h) = o.h {
        c.h = Some(HSpec::Builtin(h));
    }
    if o.symmetric {
        c.symmetric = Some(true);
    }
    Ok(c)
}

fn main() -> ExitCode {
    let (kind, opts) = Cli::parse().command.split();
    let config = match build_config(kind, opts) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let result = match run(&config) {
        Ok(o) => Ok(o),
        Err(RunError::Math(e)) => Err(e),
        Err(RunError::Usage(e)) => return usage(e),
    };
    let passed = result.as_ref().is_ok_and(|o| o.passed());
    let written = match &config.out {
        Some(dir) => write_dir(dir, &config, result.as_ref().map_err(Clone::clone)),
        None => print_stdout(&config, &result),
    };
    if let Err(e) = written {
        return usage(e);
    }
    let summary = Summary::new(&config, result.as_ref().map_err(Clone::clone));
    for a in &summary.assertions {
        let mark = if a.passed { "PASS" } else { "FAIL" };
        eprintln!("[{mark}] {}{}", a.name, if a.detail.is_empty() { String::new() } else { format!(": {}", a.detail) });
    }
    if let Some(e) = &summary.error {
        eprintln!("error ({}): {}", e.kind, e.message);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_stdout(
    config: &ExperimentConfig,
    result: &Result<formsums_cli::Outcome, formsums_cli::ErrorRecord>,
) -> anyhow::Result<()> {
    if let Ok(o) = result {
        std::io::stdout().write_all(render(config, o)?.as_bytes())?;
    }
    Ok(())
}

fn usage(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}
