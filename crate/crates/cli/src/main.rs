//! `superext`: reproducible reports for the cohomology, symmetric-power,
//! invariant and rank-variety suites.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or a
//! computation errors, and 2 for invalid input.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use superext::gf::{fp_linear_independent, Fe, GaloisField};
use superext::resolution::CACHE_ENV;

use report::Report;

#[derive(Parser)]
#[command(name = "superext", version, about = "Cohomology and module checks for small Hopf superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ext ring of kG with the rank-one presentation or the main relations.
    Cohomology {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 8)]
        maxdeg: usize,
    },
    /// Periodicity, projectivity, uniseriality and Steinberg checks.
    Sympowers {
        #[command(flatten)]
        group: GroupArgs,
        /// Largest degree; defaults to 2 p^{r+s}.
        #[arg(long = "max-n")]
        max_n: Option<usize>,
    },
    /// Invariant dimensions and generators of k[X,Y]^H.
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 9)]
        maxdeg: usize,
    },
    /// Freeness of S^{p^i - 1} on every shifted subgroup over a sample field.
    Rankvariety {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Field whose points are scanned, e.g. 3 or 3^2; defaults to --field.
        #[arg(long = "sample-field")]
        sample_field: Option<String>,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Coefficient field, "p" or "p^m".
    #[arg(long, default_value = "3")]
    field: String,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Comma-separated parameters μ_1..μ_s, as polynomials in w (e.g. 1,w).
    #[arg(long, value_delimiter = ',')]
    mu: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached resolutions.
    #[arg(long = "cache-dir", env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Validated group parameters.
pub struct Group {
    pub field: Arc<GaloisField>,
    pub r: usize,
    pub s: usize,
    pub mus: Vec<Fe>,
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
}

pub enum Failure {
    Invalid(String),
    Compute(String),
}

impl GroupArgs {
    fn validate(&self) -> Result<Group, Failure> {
        let field = GaloisField::from_spec(&self.field).map_err(|e| Failure::Invalid(e.to_string()))?;
        if self.r + self.s == 0 {
            return Err(Failure::Invalid("at least one of r, s must be positive".into()));
        }
        if self.mu.len() != self.s {
            return Err(Failure::Invalid(format!("expected {} values for --mu, got {}", self.s, self.mu.len())));
        }
        let mus = self
            .mu
            .iter()
            .map(|m| field.parse_element(m))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
        if !fp_linear_independent(&field, &mus) {
            return Err(Failure::Invalid("NotFaithful: parameters are linearly dependent over the prime field".into()));
        }
        Ok(Group { field, r: self.r, s: self.s, mus, cache_dir: self.cache_dir.clone(), timings: self.timings })
    }
}

fn run(cli: Cli) -> Result<(Report, Format), Failure> {
    match cli.command {
        Command::Cohomology { group, maxdeg } => Ok((report::cohomology(&group.validate()?, maxdeg)?, group.format)),
        Command::Sympowers { group, max_n } => Ok((report::sympowers(&group.validate()?, max_n)?, group.format)),
        Command::Invariants { group, maxdeg } => Ok((report::invariants(&group.validate()?, maxdeg)?, group.format)),
        Command::Rankvariety { group, i, sample_field } => {
            let g = group.validate()?;
            let sample = match sample_field {
                Some(spec) => GaloisField::from_spec(&spec).map_err(|e| Failure::Invalid(e.to_string()))?,
                None => Arc::clone(&g.field),
            };
            Ok((report::rankvariety(&g, i, &sample)?, group.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((rep, format)) => {
            print!("{}", rep.render(format));
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            println!("{}", serde_json::json!({ "passed": false, "error": { "kind": "invalid_input", "message": msg } }));
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            println!("{}", serde_json::json!({ "passed": false, "error": { "kind": "computation", "message": msg } }));
            ExitCode::from(1)
        }
    }
}
