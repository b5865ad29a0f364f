mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use psirh_core::Error;

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "psirh",
    version,
    about = "Exception scans, champion numbers and primorial tables for the Robin and Dedekind-psi criteria"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Lower end of the range (inclusive).
    #[arg(long, global = true)]
    pub lo: Option<u64>,
    /// Upper end of the range (inclusive).
    #[arg(long, global = true)]
    pub hi: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub criterion: Option<Criterion>,
    /// Comma-separated primorial indices.
    #[arg(long, global = true, value_delimiter = ',')]
    pub indices: Option<Vec<u64>>,
    #[arg(long, global = true)]
    pub limit: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Decimal places for Markdown display.
    #[arg(long, global = true, default_value_t = 6)]
    pub digits: usize,
    /// θ checkpoint file, created on first use.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub bfile: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub sequence: Option<Sequence>,
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Exit with status 1 when the report lists exceptions or failures.
    #[arg(long, global = true)]
    pub fail_on_exception: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List every n in [lo, hi] where the criterion value is ≥ 0.
    Scan,
    /// Numbers l·N_k with l below the next prime.
    Champions,
    /// Superabundant numbers up to --limit.
    Superabundant,
    /// Check the ψ-multiple identity and both propositions.
    Props,
    /// θ(p_n)/p_n, the f̃ successor ratio and the k-ratio.
    Table1,
    /// f(N_n) at primorial indices.
    Table2,
    /// Explicit inequalities for primorials and for σ.
    Bounds,
    /// exp(R_n)/log p_n against its limit.
    Mertens,
    /// Compare generated terms against an OEIS b-file.
    OeisCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sequence {
    #[value(name = "A060735")]
    A060735,
    #[value(name = "A004394")]
    A004394,
}

fn exit_status(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.digits > 17 {
        eprintln!("error: --digits must be at most 17 (got {})", cli.digits);
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_status(&e));
        }
    };
    let text = report.render(cli.format, cli.digits, start.elapsed().as_secs_f64());
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
    {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(2);
    }
    if cli.fail_on_exception && !report.clean {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
