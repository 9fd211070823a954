//! `locsym`: local symbols, decompositions, Witt vectors and reciprocity
//! checks from the command line.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use locsym::Error;

use locsym_cli::commands::{self, Outcome};
use locsym_cli::parse::{parse_context, Context};

#[derive(Parser, Debug)]
#[command(name = "locsym", version, about = "Exact local symbols and reciprocity on the projective line")]
struct Cli {
    #[command(flatten)]
    ctx: CtxArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CtxArgs {
    /// Coefficient field: F<q>, F<q>:<modulus in x> or Q, optionally with an [e^n] suffix
    #[arg(long, global = true, default_value = "F5")]
    field: String,
    /// Nilpotent extension e^n (overrides a suffix on --field)
    #[arg(long, global = true)]
    alg: Option<String>,
    /// Coefficients kept when an input quotient has to be expanded
    #[arg(long, global = true, env = "LS_DEFAULT_PREC", default_value_t = 16)]
    prec: i64,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contou-Carrère symbol of two Laurent series in z
    Symbol {
        u: String,
        w: String,
        /// Compose with the character x -> x^N
        #[arg(long = "char", value_name = "N", allow_hyphen_values = true)]
        character: Option<i64>,
        /// Work over the degree-d extension (generator y) and take the norm
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// Canonical factorization of a Laurent series unit
    Decompose { u: String },
    /// Witt vector operations
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// Local symbols of two rational functions in t at every point of the support
    Reciprocity {
        f: String,
        g: String,
        /// Use the Hilbert symbol with values in the m-th roots of unity
        #[arg(long)]
        m: Option<u64>,
        /// Compose with the character x -> x^N
        #[arg(long = "char", value_name = "N", allow_hyphen_values = true, conflicts_with = "m")]
        character: Option<i64>,
        /// Worker threads for the per-point symbols
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Hilbert norm residue symbol of two Laurent series in z
    Hilbert {
        u: String,
        w: String,
        #[arg(long)]
        m: u64,
    },
    /// Run a seeded property suite
    Verify {
        /// witt, decompose, axioms, residue-vs-product or reciprocity
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WittOp {
    /// Sum of two vectors, e.g. "1,0" "1,0"
    Add { x: String, y: String },
    /// The unit series 1 + x_1 t + ... + x_n t^n
    Bridge { x: String },
}

/// Exit status for a library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotAUnit => 3,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    if let Command::Verify { suite, seed, cases } = &cli.command {
        return commands::verify(suite, *seed, *cases);
    }
    let ctx = parse_context(&cli.ctx.field, cli.ctx.alg.as_deref())?;
    match ctx {
        Context::Fp(a) => run_in(&a, cli),
        Context::Q(a) => run_in(&a, cli),
    }
}

fn run_in<F: locsym::PrimeField>(alg: &locsym::Algebra<F>, cli: &Cli) -> Result<Outcome, Error> {
    let prec = cli.ctx.prec;
    match &cli.command {
        Command::Symbol { u, w, character, deg } => commands::symbol(alg, u, w, *character, *deg, prec),
        Command::Decompose { u } => commands::decompose(alg, u, prec),
        Command::Witt { op: WittOp::Add { x, y } } => commands::witt_add(alg, x, y),
        Command::Witt { op: WittOp::Bridge { x } } => commands::witt_bridge(alg, x),
        Command::Reciprocity { f, g, m, character, jobs } => commands::reciprocity(alg, f, g, *m, *character, *jobs),
        Command::Hilbert { u, w, m } => commands::hilbert(alg, u, w, *m, prec),
        Command::Verify { .. } => unreachable!("handled before the context is parsed"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            if cli.ctx.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
