//! `spq`: invariants of splice-quotient singularities from a resolution graph.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal assertion, 3 the
//! monomial-condition search hit its bound.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use splice_quotient::{Error, Exec};

#[derive(Parser, Debug)]
#[command(name = "spq", version, about = "Exact invariants of splice-quotient surface singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check the graph and report its shape.
    Validate(Common),
    /// Determinant, discriminant group, node weights, canonical cycle.
    Invariants(Common),
    /// Eigenspace Hilbert series at a node.
    Hilbert(Common),
    /// The constants c_v by both routes.
    Cv(Common),
    /// Geometric genus.
    Pg(Common),
    /// Geometric genus of the universal abelian cover with all h1 values.
    PgUac(Common),
    /// h1 of one eigensheaf.
    H1(Common),
    /// Search for admissible monomials at every node and branch.
    MonomialCheck(Common),
    /// Neumann-Wahl equations with seeded generic coefficients.
    EmitEquations(Common),
    /// Compare brute-force eigenspace dimensions with the Molien series.
    OracleVerify(Common),
    /// Laufer's fundamental cycle and its arithmetic genus.
    FundamentalCycle(Common),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_name = "ID")]
    node: Option<String>,
    #[arg(long = "char", value_name = "A,B,..")]
    character: Option<String>,
    #[arg(long, value_name = "N")]
    max_degree: Option<u64>,
    #[arg(long, value_name = "N")]
    bound: Option<u64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Run from every node and require identical results.
    #[arg(long)]
    all_nodes: bool,
    /// Worker threads; 1 selects the sequential code path.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

/// Parsed flags handed to the report builders.
#[derive(Debug, Clone)]
pub struct Options {
    pub input: PathBuf,
    pub format: Format,
    pub node: Option<String>,
    pub character: Option<String>,
    pub max_degree: Option<u64>,
    pub bound: Option<u64>,
    pub seed: Option<u64>,
    pub all_nodes: bool,
    pub exec: Exec,
}

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
    Unknown(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MonomialConditionUnknown(_) => Failure::Unknown(e.to_string()),
            e if e.is_internal() => Failure::Internal(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
            Failure::Unknown(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) | Failure::Unknown(m) => m,
        }
    }
}

/// Output of a successful or partially successful command.
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    /// Nonzero when the report itself signals a verdict (exit 2 or 3).
    pub code: u8,
}

fn options(c: Common) -> Result<Options, Failure> {
    let input = c.input.ok_or_else(|| Failure::Input("--input is required".into()))?;
    let exec = match c.threads {
        Some(0) => return Err(Failure::Input("--threads must be positive".into())),
        Some(1) => Exec::Sequential,
        Some(n) => {
            init_pool(n)?;
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    Ok(Options {
        input,
        format: c.format,
        node: c.node,
        character: c.character,
        max_degree: c.max_degree,
        bound: c.bound,
        seed: c.seed,
        all_nodes: c.all_nodes,
        exec,
    })
}

#[cfg(feature = "parallel")]
fn init_pool(n: usize) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn init_pool(_n: usize) -> Result<(), Failure> {
    Ok(())
}

fn dispatch(cmd: Command) -> Result<Outcome, Failure> {
    let (name, common) = match cmd {
        Command::Validate(c) => ("validate", c),
        Command::Invariants(c) => ("invariants", c),
        Command::Hilbert(c) => ("hilbert", c),
        Command::Cv(c) => ("cv", c),
        Command::Pg(c) => ("pg", c),
        Command::PgUac(c) => ("pg-uac", c),
        Command::H1(c) => ("h1", c),
        Command::MonomialCheck(c) => ("monomial-check", c),
        Command::EmitEquations(c) => ("emit-equations", c),
        Command::OracleVerify(c) => ("oracle-verify", c),
        Command::FundamentalCycle(c) => ("fundamental-cycle", c),
    };
    let opts = options(common)?;
    report::run(name, &opts)
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
    match dispatch(cli.command) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
