//! `toric-mori`: validate fans, find extremal rays, contract, flip and run
//! relative positivity queries from the command line.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 mathematical failure.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "toric-mori", version, about = "Relative Mori theory of simplicial toric varieties")]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Output file (directory for `mmp`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accept the morphism as proper when properness cannot be decided.
    #[arg(long, global = true)]
    assume_proper: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a fan file describes a fan.
    Validate { fan: PathBuf },
    /// Summarize a fan: smoothness, completeness, walls, primitive collections.
    Info { fan: PathBuf },
    /// Contracted curves, extremal rays and their primitive relations.
    Mori { morphism: PathBuf },
    /// Contract an extremal ray.
    Contract {
        morphism: PathBuf,
        #[arg(long, value_parser = parse_index)]
        ray: usize,
    },
    /// Flip a small extremal ray.
    Flip {
        morphism: PathBuf,
        #[arg(long, value_parser = parse_index)]
        ray: usize,
    },
    /// Relative nef, ample and free tests and twist criteria.
    Positivity {
        morphism: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, value_enum, conflicts_with_all = ["twist_free", "twist_ample", "twist_bound"])]
        check: Option<Check>,
        /// Two rays `v1 v2`: is `L(-D_v1-D_v2)` relatively free?
        #[arg(long, num_args = 2, value_parser = parse_index, conflicts_with_all = ["twist_ample", "twist_bound"])]
        twist_free: Option<Vec<usize>>,
        /// One ray `v`: is `L(-D_v)` relatively ample?
        #[arg(long, value_parser = parse_index, conflicts_with = "twist_bound")]
        twist_ample: Option<usize>,
        /// Bound `t`: if `L . C_R >= t` for all extremal rays, check `L(-D) . C_R >= t-1`.
        #[arg(long)]
        twist_bound: Option<u64>,
    },
    /// Run MMP steps along the given extremal ray choices.
    Mmp {
        morphism: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_index, required = true)]
        ray_choice: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Nef,
    Ample,
    Free,
}

/// Accepts `3` or `r3`.
fn parse_index(s: &str) -> Result<usize, String> {
    s.strip_prefix('r')
        .unwrap_or(s)
        .parse()
        .map_err(|_| format!("{s:?} is not an index"))
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), Failure> {
    let opts = commands::Options {
        out: cli.out.clone(),
        assume_proper: cli.assume_proper,
    };
    match &cli.command {
        Command::Validate { fan } => commands::validate(report, fan),
        Command::Info { fan } => commands::info(report, fan),
        Command::Mori { morphism } => commands::mori(report, &opts, morphism),
        Command::Contract { morphism, ray } => commands::contract(report, &opts, morphism, *ray),
        Command::Flip { morphism, ray } => commands::flip(report, &opts, morphism, *ray),
        Command::Positivity {
            morphism,
            divisor,
            check,
            twist_free,
            twist_ample,
            twist_bound,
        } => {
            let query = match (check, twist_free, twist_ample, twist_bound) {
                (_, Some(v), _, _) => commands::Query::TwistFree(v[0], v[1]),
                (_, _, Some(v), _) => commands::Query::TwistAmple(*v),
                (_, _, _, Some(t)) => commands::Query::TwistBound(*t),
                (c, _, _, _) => commands::Query::Check(c.unwrap_or(Check::Nef)),
            };
            commands::positivity(report, &opts, morphism, divisor, query)
        }
        Command::Mmp {
            morphism,
            ray_choice,
        } => commands::mmp(report, &opts, morphism, ray_choice),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut report = Report::new(std::env::args().skip(1).collect());
    let outcome = run(&cli, &mut report);
    let code = outcome.as_ref().map_or_else(|f| f.code, |_| 0);
    let mut stdout = std::io::stdout().lock();
    if cli.json {
        if let Err(f) = &outcome {
            report.note(format!("error: {f}"));
        }
        let _ = writeln!(stdout, "{}", report.to_json());
    } else {
        let _ = write!(stdout, "{}", report.to_text());
        if let Err(f) = &outcome {
            eprintln!("error: {f}");
        }
    }
    ExitCode::from(code)
}
