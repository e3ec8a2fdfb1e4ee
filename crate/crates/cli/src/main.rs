use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod render;

use commands::CliError;
use render::Mode;

/// Strong atoms, factorizations, decay decompositions and zeta functions
/// of Krull monoids.
#[derive(Debug, Parser)]
#[command(name = "krull-zeta", version, about)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Verb {
    /// Summarize the monoid of a spec.
    Info,
    /// List atoms up to --bound.
    Atoms,
    /// List strong atoms (up to --bound when given).
    StrongAtoms,
    /// All factorizations of --element.
    Factorize,
    /// Decay decomposition of --element.
    Decay,
    /// Partial zeta sum and Euler product bracket.
    Zeta,
    /// Truncated Euler product over the first --atoms strong atoms.
    Euler,
    /// Dedekind zeta of a quadratic field spec.
    Dedekind,
    /// Run the built-in property suite.
    Verify,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// JSON monoid spec.
    #[arg(long, global = true, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    /// Grade or norm bound.
    #[arg(long, global = true, value_name = "N")]
    pub bound: Option<u64>,
    /// Integer, vector "a,b,c", exponent map "3:1,7:1", or "u,v" for u + v·ω in a field.
    #[arg(long, global = true, value_name = "E", allow_hyphen_values = true)]
    pub element: Option<String>,
    /// power:s | decay:c | wallis | identity | file:PATH
    #[arg(long, global = true, value_name = "SCALE")]
    pub scale: Option<String>,
    /// Heap term budget.
    #[arg(long, global = true, value_name = "N")]
    pub terms: Option<u64>,
    /// Number of strong atoms in the Euler product, smallest scale value first.
    #[arg(long, global = true, value_name = "N")]
    pub atoms: Option<usize>,
    /// Bound on Σ 1/σ(a) over strong atoms outside the product.
    #[arg(long, global = true, value_name = "X")]
    pub tail: Option<f64>,
    /// Sum-versus-product tolerance for euler --terms.
    #[arg(long, global = true, value_name = "X", default_value_t = 1e-3)]
    pub tolerance: f64,
    /// Run the infinitude report with constant C instead of the zeta bracket.
    #[arg(long, global = true, value_name = "C")]
    pub infinitude: Option<f64>,
    /// Seed for verify.
    #[arg(long, global = true, default_value_t = 0x6b_7275_6c6c)]
    pub seed: u64,
    /// Random member pairs per class group for verify.
    #[arg(long, global = true, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long, global = true)]
    pub csv: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let mode = if cli.opts.json {
        Mode::Json
    } else if cli.opts.csv {
        Mode::Csv
    } else {
        Mode::Table
    };
    let result = match cli.verb {
        Verb::Info => commands::info(&cli.opts),
        Verb::Atoms => commands::atoms(&cli.opts),
        Verb::StrongAtoms => commands::strong_atoms(&cli.opts),
        Verb::Factorize => commands::factorize(&cli.opts),
        Verb::Decay => commands::decay(&cli.opts),
        Verb::Zeta => commands::zeta(&cli.opts),
        Verb::Euler => commands::euler(&cli.opts),
        Verb::Dedekind => commands::dedekind(&cli.opts),
        Verb::Verify => commands::verify(&cli.opts),
    };
    let (rendered, failed) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("krull-zeta: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    if rendered.write(mode, &mut out).and_then(|_| out.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    if failed {
        eprintln!("krull-zeta: {}", CliError::Failed);
        return ExitCode::from(CliError::Failed.exit_code());
    }
    ExitCode::SUCCESS
}
