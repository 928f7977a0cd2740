//! Command-line front end for `hesse-core`: analyze a form, build
//! Gordan-Noether instances, run the invariant suites, and write catalogs.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 non-homogeneous input,
//! 4 a checked identity failed, 5 invalid instance data, 6 retries exhausted.

pub mod analyze;
pub mod args;
pub mod generate;
pub mod report;
pub mod suites;

use std::fs;
use std::time::Instant;

use hesse_core::{Error, Exec, Seed};
use serde_json::{json, Value};

use args::{Cli, Command, Suite};
use report::Report;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_HOMOGENEOUS: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;
pub const EXIT_VALIDATION: i32 = 5;
pub const EXIT_RETRIES: i32 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::Syntax { .. }
                | Error::MixedPrefix { .. }
                | Error::NegativeExponent { .. }
                | Error::IndexOutOfRange { .. }
                | Error::InvalidModulus(..)
                | Error::InvalidArgument(_)
                | Error::ZeroPolynomial => EXIT_USAGE,
                Error::NotHomogeneous => EXIT_NOT_HOMOGENEOUS,
                Error::Validation(_) => EXIT_VALIDATION,
                Error::RetriesExhausted { .. } => EXIT_RETRIES,
                _ => EXIT_VIOLATION,
            },
            CliError::Json(_) => EXIT_USAGE,
            CliError::Io(_) => 1,
        }
    }
}

/// What a command produced: the document to print and whether every check passed.
pub struct Outcome {
    pub document: Value,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            EXIT_VIOLATION
        }
    }
}

fn from_report(r: Report) -> Outcome {
    Outcome { passed: r.passed(), document: r.to_value() }
}

pub fn verify(suite: Suite, count: Option<usize>, inject_fault: bool, common: &args::Common) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let seed = Seed(common.seed);
    let exec = Exec::default();
    let mut r = Report::new("verify");
    r.input.insert("suite".into(), json!(format!("{suite:?}").to_lowercase()));
    r.input.insert("count".into(), json!(count));
    r.input.insert("field".into(), json!(common.field.to_string()));
    if inject_fault {
        r.input.insert("inject_fault".into(), json!(true));
    }
    r.seeds.insert("root".into(), json!(common.seed));
    let all = suite == Suite::All;
    let mut run = |name: &str, f: &mut dyn FnMut() -> Result<suites::SuiteResult, Error>| -> Result<(), CliError> {
        let t = Instant::now();
        let res = f()?;
        r.time(name, t.elapsed());
        for msg in &res.failures {
            r.fail(format!("{name}: {msg}"));
        }
        r.results.insert(name.into(), res.value);
        Ok(())
    };
    if all || suite == Suite::Lowdim {
        run("lowdim", &mut || suites::lowdim(count.unwrap_or(suites::LOWDIM_COUNT), seed, exec))?;
    }
    if all || suite == Suite::Gn {
        run("gn", &mut || suites::gn(count.unwrap_or(suites::GN_COUNT), seed, common))?;
    }
    if all || suite == Suite::Psi {
        run("psi", &mut || suites::psi(count.unwrap_or(suites::PSI_COUNT), seed, inject_fault))?;
    }
    if all || suite == Suite::P4 {
        run("p4", &mut || suites::p4(count.unwrap_or(suites::P4_COUNT), seed, exec))?;
    }
    if all || suite == Suite::Kernels {
        run("kernels", &mut || suites::kernels(seed))?;
    }
    r.time("total", t0.elapsed());
    Ok(r)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let common = &cli.common;
    let outcome = match &cli.command {
        Command::Analyze { poly, max_relation_degree, inject_fault } => {
            from_report(analyze::analyze(poly, *max_relation_degree, *inject_fault, common)?)
        }
        Command::Generate(a) => from_report(generate::generate(a, common)?),
        Command::Verify { suite, count, inject_fault } => from_report(verify(*suite, *count, *inject_fault, common)?),
        Command::Catalog { types, count, out } => {
            let (entries, passed) = generate::catalog(types, *count, common)?;
            if let Some(path) = out {
                fs::write(path, serde_json::to_string_pretty(&entries)? + "\n")?;
            }
            Outcome { document: entries, passed }
        }
    };
    if let Some(path) = &common.json {
        fs::write(path, serde_json::to_string_pretty(&outcome.document)? + "\n")?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::NotHomogeneous).exit_code(), 3);
        assert_eq!(CliError::from(Error::Syntax { pos: 0, msg: String::new() }).exit_code(), 2);
        assert_eq!(CliError::from(Error::Validation(vec![])).exit_code(), 5);
        assert_eq!(CliError::from(Error::RetriesExhausted { attempts: 1, reason: String::new() }).exit_code(), 6);
        assert_eq!(CliError::from(Error::InexactDivision).exit_code(), 4);
    }
}
