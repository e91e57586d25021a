//! Command-line front end for `nitsche_core`.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 no solution, 4 divergence,
//! 5 property violation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod selector;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;

use args::{Cli, Command, Format, GlobalOpts};
use error::{exit, CliError, Result};
use report::RunReport;

enum Rendered {
    Report(RunReport),
    Profile(commands::radial::Profile),
}

struct Outcome {
    output: Rendered,
    code: i32,
    diagnostic: Option<String>,
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let violation_code = |r: &RunReport| if r.aggregate.violations > 0 { exit::VIOLATION } else { exit::OK };
    let outcome = match &cli.command {
        Command::Bound(a) => {
            let r = commands::bound::run(g, a)?;
            Outcome {
                output: Rendered::Report(r),
                code: exit::OK,
                diagnostic: None,
            }
        }
        Command::Radial(a) => {
            let (r, profile, converged) = commands::radial::run(g, a)?;
            let code = if converged { exit::OK } else { exit::NO_SOLUTION };
            let diagnostic = (!converged).then(|| "shooting did not reach the boundary tolerance".to_string());
            let output = match g.format {
                Format::Csv => Rendered::Profile(profile),
                Format::Json => Rendered::Report(r),
            };
            Outcome { output, code, diagnostic }
        }
        Command::Sweep(a) => {
            let r = commands::sweep::run(g, a)?;
            let diagnostic = (r.aggregate.violations > 0)
                .then(|| format!("{} proper solutions violate the bound", r.aggregate.violations));
            Outcome {
                code: violation_code(&r),
                output: Rendered::Report(r),
                diagnostic,
            }
        }
        Command::VerifyLemma(a) => {
            let (r, offenders) = commands::lemma::run(g, a)?;
            let diagnostic = match offenders.first() {
                Some(o) => Some(format!(
                    "{} violations; first offender: {}",
                    r.aggregate.violations,
                    serde_json::to_string(o)?
                )),
                None => None,
            };
            Outcome {
                code: violation_code(&r),
                output: Rendered::Report(r),
                diagnostic,
            }
        }
        Command::VerifyProp(a) => {
            let r = commands::prop::run(g, a)?;
            let diagnostic = (r.aggregate.violations > 0)
                .then(|| format!("{} integrals fall below the bound", r.aggregate.violations));
            Outcome {
                code: violation_code(&r),
                output: Rendered::Report(r),
                diagnostic,
            }
        }
        Command::Tension(a) => {
            let r = commands::tension::run(g, a)?;
            let diagnostic = (r.aggregate.violations > 0).then(|| {
                format!(
                    "{} samples at or above the threshold {}",
                    r.aggregate.violations, a.threshold
                )
            });
            Outcome {
                code: violation_code(&r),
                output: Rendered::Report(r),
                diagnostic,
            }
        }
    };
    Ok(outcome)
}

fn emit(output: &Rendered, global: &GlobalOpts, stdout: &mut dyn Write) -> Result<()> {
    let mut file;
    let w: &mut dyn Write = match &global.out {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    match output {
        Rendered::Report(r) => r.write(global.format, w)?,
        Rendered::Profile(p) => report::write_profile_csv(&p.t, &p.y, &p.dy, w)?,
    }
    w.flush()?;
    Ok(())
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let fail = |e: CliError, stderr: &mut dyn Write| {
        let _ = writeln!(stderr, "error: {e}");
        e.exit_code()
    };
    let args = match config::expand_args(args) {
        Ok(a) => a,
        Err(e) => return fail(e, stderr),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                exit::OK
            } else {
                let _ = write!(stderr, "{e}");
                exit::USAGE
            };
        }
    };
    let o = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => return fail(e, stderr),
    };
    match emit(&o.output, &cli.global, stdout) {
        Ok(()) => {}
        // The reader went away (e.g. `| head`); the verdict still stands.
        Err(e) if e.is_broken_pipe() => {}
        Err(e) => return fail(e, stderr),
    }
    if let Some(d) = o.diagnostic {
        let _ = writeln!(stderr, "{d}");
    }
    o.code
}
