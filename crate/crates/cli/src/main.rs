use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{CliError, Report};
use walgebra::hecke::EtaConvention;

#[derive(Parser, Debug)]
#[command(name = "walg", version, about = "Exact checks for finite W-algebras of type A")]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All pyramids of a shape, e.g. `3,2,2`.
    Pyramids { shape: String },
    /// Good grading report for a pyramid given as JSON or a JSON file.
    GradingCheck { pyramid: String },
    /// Homogeneous basis of the centralizer of the pyramid nilpotent.
    Centralizer { pyramid: String },
    /// Restricted weights, their d-values and the integral good points.
    Polytope { shape: String },
    /// Adjacency chain between two good points, e.g. `0,-1` and `0,1`.
    Adjacency { shape: String, p: String, q: String },
    /// Row determinant generators of the regular W-algebra of gl_n.
    WGenerators { n: usize },
    /// Basis of the filtered piece of W up to a Kazhdan degree.
    WSearch {
        pyramid: String,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        /// Dimension of the isotropic subspace; defaults to Lagrangian.
        #[arg(long)]
        isotropic_rank: Option<usize>,
    },
    /// d^2 = 0 and basis independence of phi for an even pyramid.
    BrstCheck { pyramid: String },
    /// DAHA relations, cyclotomic relation and double centralizer dimensions.
    SchurDuality {
        shape: String,
        d: usize,
        #[arg(long, value_enum, default_value = "untwist")]
        eta_convention: Convention,
    },
    /// The acceptance suite, or one criterion of it.
    Selftest {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Option<u8>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Convention {
    Twist,
    Untwist,
}

impl From<Convention> for EtaConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Twist => EtaConvention::Twist,
            Convention::Untwist => EtaConvention::Untwist,
        }
    }
}

fn dispatch(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Pyramids { shape } => commands::pyramids(&shape),
        Command::GradingCheck { pyramid } => commands::grading_check(&pyramid),
        Command::Centralizer { pyramid } => commands::centralizer(&pyramid),
        Command::Polytope { shape } => commands::polytope(&shape),
        Command::Adjacency { shape, p, q } => commands::adjacency(&shape, &p, &q),
        Command::WGenerators { n } => commands::w_generators(n),
        Command::WSearch { pyramid, max_degree, isotropic_rank } => {
            commands::w_search(&pyramid, max_degree, isotropic_rank)
        }
        Command::BrstCheck { pyramid } => commands::brst_check(&pyramid),
        Command::SchurDuality { shape, d, eta_convention } => commands::schur_duality(&shape, d, eta_convention.into()),
        Command::Selftest { criterion } => commands::selftest(criterion),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&report.value).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = cli.output {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
