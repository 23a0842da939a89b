mod commands;
mod jobspec;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "multinv", version, about = "Cohen-Macaulay classification of multiplicative invariants over F_p")]
struct Cli {
    /// Render a plain-text view instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Job file in JSON, or `-` for stdin (the default).
    #[arg(long, short)]
    input: Option<String>,
    /// Use a built-in example group instead of a job file.
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Override the characteristic.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the invariant ring is Cohen-Macaulay.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Evaluate every rule and check that they agree.
        #[arg(long)]
        audit: bool,
    },
    /// Group structure, fixed lattices, isotropy and mu.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Cohomology dimensions of the group with F_p coefficients.
    Cohomology {
        /// A built-in group name or a job file (`-` for stdin).
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Orbit-sum basis of the invariants near the origin.
    Invariants {
        #[command(flatten)]
        input: Input,
        /// Box radius; defaults to the job's `ball` option.
        #[arg(long)]
        ball: Option<i64>,
    },
    /// Run the acceptance criteria on the built-in corpus.
    Selftest {
        /// Run only these criteria (repeatable).
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=9))]
        criteria: Vec<u8>,
    },
    /// List the built-in groups.
    Corpus,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(multinv::Error),
}

impl From<multinv::Error> for CliError {
    fn from(e: multinv::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use multinv::Error::*;
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) if e.is_resource_bound() => 3,
            CliError::Core(
                DimensionMismatch { .. }
                | NotSquare { .. }
                | NonUnimodular { .. }
                | NotPrime(_)
                | Precondition(_)
                | NotContained
                | NotSubgroup
                | Overflow,
            ) => 2,
            CliError::Core(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

pub struct Report {
    pub json: serde_json::Value,
    pub human: String,
    /// Non-zero exit status for a successful run, e.g. failed self-test criteria.
    pub status: u8,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify { input, audit } => {
            let (name, mut spec) = jobspec::resolve(input.builtin.as_deref(), input.input.as_deref(), input.p)?;
            spec.options.audit |= *audit;
            commands::classify(&name, &spec)
        }
        Command::Analyze { input } => {
            let (name, spec) = jobspec::resolve(input.builtin.as_deref(), input.input.as_deref(), input.p)?;
            commands::analyze(&name, &spec)
        }
        Command::Cohomology { group, depth, p } => {
            let (name, spec) = match multinv::corpus::builtin(group) {
                Some(_) => jobspec::resolve(Some(group), None, *p)?,
                None => jobspec::resolve(None, Some(group), *p)?,
            };
            commands::cohomology(&name, &spec, *depth)
        }
        Command::Invariants { input, ball } => {
            let (name, mut spec) = jobspec::resolve(input.builtin.as_deref(), input.input.as_deref(), input.p)?;
            if let Some(b) = ball {
                spec.options.ball = *b;
                spec.validate()?;
            }
            commands::invariants(&name, &spec)
        }
        Command::Selftest { criteria } => Ok(commands::selftest(criteria)),
        Command::Corpus => commands::corpus(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.human {
                print!("{}", report.human);
            } else {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize"));
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.human {
                eprintln!("error: {}", e.message());
            } else {
                let body = serde_json::json!({ "error": e.message(), "exit_code": code });
                eprintln!("{}", serde_json::to_string_pretty(&body).expect("errors serialize"));
            }
            ExitCode::from(code)
        }
    }
}
