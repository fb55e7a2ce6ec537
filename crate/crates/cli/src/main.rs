//! `contact-lie`: command-line front end for the contact-lie toolkit.
//!
//! Every subcommand prints one report to stdout, JSON by default. Errors go
//! to stderr with exit code 1 for bad input, 2 when the mathematics rejects
//! the input, and 3 when an internal identity fails.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contact_lie::{Error, ErrorClass};

#[derive(Parser, Debug)]
#[command(name = "contact-lie", version, about = "Exact computations for contact Lie systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the contact form is contact; report η∧(dη)^n and Reeb.
    CheckContact(SystemArgs),
    /// Reeb vector field of the contact form.
    Reeb(SystemArgs),
    /// Hamiltonian vector field of a function, or Hamiltonian of a field.
    HamVf(HamVfArgs),
    /// Contact bracket of two functions and the field morphism check.
    Bracket(BracketArgs),
    /// Contact condition on a three-dimensional Lie algebra.
    Classify3d(Classify3dArgs),
    /// Smallest Lie algebra containing the generators.
    Closure(ClosureArgs),
    /// Contact, conservative contact, or not Hamiltonian; odd-rank no-go.
    ClassifySystem(SystemArgs),
    /// Project a conservative system along the Reeb direction.
    Project(ProjectArgs),
    /// Reduce to a level set of the momentum map.
    Reduce(ReduceArgs),
    /// Momentum map of the declared frame.
    Momentum(SystemArgs),
    /// Diagonal prolongation of the generators to k copies.
    Prolong(ProlongArgs),
    /// First integrals and superposition rule from a Casimir.
    Superposition(SuperpositionArgs),
    /// Fixed-step RK4 trajectory with optional monitored integrals.
    Integrate(IntegrateArgs),
    /// Field samples on a grid, zero clusters and equilibria.
    Portrait(PortraitArgs),
    /// Run the acceptance criteria over the bundled examples.
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// Bundled system name or path to a JSON definition.
    #[arg(long, short)]
    pub system: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct HamVfArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Hamiltonian function h; prints X_h.
    #[arg(long, conflicts_with = "field")]
    pub hamiltonian: Option<String>,
    /// Named vector field X; prints h = -η(X) if X is Hamiltonian.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
}

#[derive(Args, Debug)]
pub struct Classify3dArgs {
    /// Built-in algebra name; all nine when omitted.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Use the structure constants of a system definition instead.
    #[arg(long, conflicts_with = "algebra")]
    pub system: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Give up once the span exceeds this dimension.
    #[arg(long, default_value_t = 12)]
    pub max_dim: usize,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Invariant variables, comma separated; defaults to the definition's hint.
    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Level μ, comma separated rationals; defaults to the definition's hint.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Vec<String>,
    /// Variables fixed by the level set; defaults to the definition's hint.
    #[arg(long, value_delimiter = ',')]
    pub fixed: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ProlongArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, default_value_t = 2)]
    pub copies: usize,
}

#[derive(Args, Debug)]
pub struct SuperpositionArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, default_value_t = 2)]
    pub copies: usize,
    /// Seed of the rational certificate search.
    #[arg(long, default_value_t = contact_lie::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Symmetry fields, comma separated; defaults to every declared field
    /// outside the generators that commutes with all of them.
    #[arg(long, value_delimiter = ',')]
    pub symmetries: Vec<String>,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Initial point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x0: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Expression to monitor along the trajectory; may be repeated.
    #[arg(long = "monitor")]
    pub monitors: Vec<String>,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub hi: f64,
    /// Samples per axis.
    #[arg(long, default_value_t = 61)]
    pub count: usize,
    /// Time at which the field is sampled.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run a single criterion.
    #[arg(long)]
    pub criterion: Option<u8>,
    #[arg(long, default_value_t = contact_lie::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// A finished report: the text for stdout and whether every check held.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Input => 1,
        ErrorClass::Rejected => 2,
        ErrorClass::Internal => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            // A closed pipe (for example `| head`) is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text.trim_end());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
