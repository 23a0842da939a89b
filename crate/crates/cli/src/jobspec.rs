use std::io::Read;
use std::path::Path;

use multinv::corpus::{self, CorpusEntry};
use multinv::{IntMatrix, MatGroup};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MAX_GROUP_ORDER_LIMIT: usize = 100_000;
pub const MAX_COHOMOLOGY_DEPTH: usize = multinv::fpcohom::DEFAULT_MAX_DEPTH;
pub const MAX_BALL: i64 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default = "default_max_group_order")]
    pub max_group_order: usize,
    #[serde(default = "default_cohomology_depth")]
    pub cohomology_depth: usize,
    #[serde(default = "default_ball")]
    pub ball: i64,
    #[serde(default)]
    pub audit: bool,
}

fn default_max_group_order() -> usize {
    multinv::matgroup::DEFAULT_MAX_ORDER
}

fn default_cohomology_depth() -> usize {
    MAX_COHOMOLOGY_DEPTH
}

fn default_ball() -> i64 {
    2
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            max_group_order: default_max_group_order(),
            cohomology_depth: default_cohomology_depth(),
            ball: default_ball(),
            audit: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub n: usize,
    pub p: u64,
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        let spec: JobSpec = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid job JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_builtin(entry: &CorpusEntry, p: Option<u64>) -> JobSpec {
        JobSpec {
            n: entry.n,
            p: p.unwrap_or(entry.primes[0]),
            generators: entry
                .generators
                .iter()
                .map(|g| g.to_i64_rows().expect("corpus entries are small"))
                .collect(),
            options: JobOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Input(m));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if !is_prime(self.p) {
            return bad(format!("p = {} is not prime", self.p));
        }
        for (k, g) in self.generators.iter().enumerate() {
            if g.len() != self.n || g.iter().any(|r| r.len() != self.n) {
                return bad(format!("generator {k} is not {0}x{0}", self.n));
            }
        }
        let o = &self.options;
        if !(1..=MAX_GROUP_ORDER_LIMIT).contains(&o.max_group_order) {
            return bad(format!("max_group_order must lie in 1..={MAX_GROUP_ORDER_LIMIT}"));
        }
        if !(1..=MAX_COHOMOLOGY_DEPTH).contains(&o.cohomology_depth) {
            return bad(format!("cohomology_depth must lie in 1..={MAX_COHOMOLOGY_DEPTH}"));
        }
        if !(0..=MAX_BALL).contains(&o.ball) {
            return bad(format!("ball must lie in 0..={MAX_BALL}"));
        }
        Ok(())
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|g| IntMatrix::from_rows(g)).collect()
    }

    pub fn group(&self) -> Result<MatGroup, CliError> {
        Ok(MatGroup::generate(self.n, &self.matrices(), self.options.max_group_order)?)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Reads a job from a file, `-` for stdin.
pub fn read_job(path: &str) -> Result<JobSpec, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    };
    JobSpec::parse(&text)
}

/// A job from `--builtin`, else from `--input` (stdin by default).
pub fn resolve(builtin: Option<&str>, input: Option<&str>, p: Option<u64>) -> Result<(String, JobSpec), CliError> {
    let (name, mut spec) = match builtin {
        Some(name) => {
            let entry = corpus::builtin(name).ok_or_else(|| CliError::Input(format!("unknown builtin group {name:?}")))?;
            (name.to_string(), JobSpec::from_builtin(&entry, p))
        }
        None => {
            let path = input.unwrap_or("-");
            (path.to_string(), read_job(path)?)
        }
    };
    if let Some(p) = p {
        spec.p = p;
        spec.validate()?;
    }
    Ok((name, spec))
}
