//! `nonstatic`: scenario runner for nonstatic coherent light waves.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 validation-suite
//! failure, 4 numerical-accuracy failure. Errors are reported as one JSON
//! object on standard error.

mod error;
mod output;
mod scenario;
mod subjects;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use nonstatic_core::nonstaticity_measure;

use crate::error::CliError;
use crate::output::{default_out, manifest_path, write_manifest, write_table, Derived};
use crate::scenario::{Cli, Scenario};

fn run(cli: Cli) -> Result<(), CliError> {
    let scenario = Scenario::from_cli(cli)?;
    let result = subjects::run(&scenario)?;
    let subject = scenario.subject.name();
    let out = scenario
        .out
        .clone()
        .unwrap_or_else(|| default_out(subject, scenario.format));
    write_table(&result.table, subject, scenario.format, &out)?;

    let p = &scenario.params;
    let derived = Derived {
        c3: p.c3(),
        nonstaticity: nonstaticity_measure(p).map_err(CliError::from_library)?,
        period: p.period(),
    };
    let fields = scenario.resolved_fields(result.q_grid, result.p_grid);
    write_manifest(&manifest_path(&out), &fields, &derived, &out, &result.table)?;

    for line in &result.summary {
        println!("{line}");
    }
    match result.failed {
        Some(msg) => Err(CliError::ValidationFailed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let flag = e
                .get(clap::error::ContextKind::InvalidArg)
                .map(|v| v.to_string())
                .unwrap_or_default();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or_default();
            let err = CliError::usage(flag, first.trim_start_matches("error: "));
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
