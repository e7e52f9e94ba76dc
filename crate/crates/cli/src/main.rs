use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclovhs::Error;

mod commands;
mod report;

use report::{Output, Report};

const YUKAWA_HELP: &str = "Expression grammar: `leaf <int>`, `tensor(e, e, ...)`, `sum(e, e, ...)`.\n\
Tensor lengths add, sum lengths take the maximum.";

#[derive(Parser)]
#[command(
    name = "cyclovhs",
    version,
    about = "Exact invariants of families of cyclic covers of P^1"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Ch10,
    Ch11,
    Classification,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenspace types, genus, purity, SINT and Fermat-CM flag of a family `m:d1,...,dN`.
    Analyze { family: String },
    /// Enumerates families with a pure (1,n)-VHS up to equivalence.
    Classify {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        m_max: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Dehn-twist matrices of the character-j eigenspace (twists numbered from 1).
    Monodromy {
        family: String,
        #[arg(long)]
        j: u64,
        /// Twist T(l, l+1); all twists when omitted.
        #[arg(long)]
        twist: Option<usize>,
        /// Restrict to the support of the eigenspace when it is not full.
        #[arg(long)]
        restrict: bool,
    },
    /// Complex/separated analysis of the character-1 summand of a four-point family.
    Exceptional { family: String },
    /// Borcea-Voisin Hodge numbers from a fixed locus of N curves of total genus N'.
    Bv { n: u64, n_prime: u64 },
    /// Fixed locus and Hodge numbers of a K3 involution with invariants (t, a, delta).
    Nikulin { t: u64, a: u64, delta: u8 },
    /// Length of the Yukawa coupling of an expression.
    #[command(after_help = YUKAWA_HELP)]
    Yukawa { expression: String },
    /// Reproduces a reference table.
    Tables {
        #[arg(value_enum)]
        which: Table,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Randomized consistency checks of the core invariants.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

fn run(command: &Command) -> Result<(&'static str, Output), Error> {
    Ok(match command {
        Command::Analyze { family } => ("analyze", commands::analyze(family)?),
        Command::Classify { n, m_max, jobs } => ("classify", commands::classify(*n, *m_max, *jobs)?),
        Command::Monodromy {
            family,
            j,
            twist,
            restrict,
        } => ("monodromy", commands::monodromy(family, *j, *twist, *restrict)?),
        Command::Exceptional { family } => ("exceptional", commands::exceptional(family)?),
        Command::Bv { n, n_prime } => ("bv", commands::bv(*n, *n_prime)?),
        Command::Nikulin { t, a, delta } => ("nikulin", commands::nikulin(*t, *a, *delta)?),
        Command::Yukawa { expression } => ("yukawa", commands::yukawa(expression)?),
        Command::Tables { which, jobs } => ("tables", commands::tables(*which, *jobs)?),
        Command::Selfcheck { seed, samples } => ("selfcheck", commands::selfcheck(*seed, *samples)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((name, output)) => {
            let failed = output.failed;
            let text = match cli.format {
                Format::Text => {
                    for w in &output.warnings {
                        eprintln!("warning: {w}");
                    }
                    output.text.clone()
                }
                Format::Json => Report::new(name, output).to_json(),
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input, 3 for a broken internal invariant.
fn exit_code(e: &Error) -> u8 {
    if e.is_internal() {
        3
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn internal_errors_exit_with_3() {
        assert_eq!(exit_code(&Error::Internal("x".into())), 3);
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::Precondition("x".into())), 2);
    }
}
