//! Command line front end: argument parsing, report construction and the
//! JSON, CSV and text emitters behind the `bvpcf` binary.

pub mod config;
pub mod decimal;
pub mod emit;
pub mod error;
pub mod report;
pub mod run;

pub use config::{parse_args, Command, Format, RunConfig};
pub use emit::{emit, CSV_HEADER};
pub use error::CliError;
pub use report::Report;
pub use run::{run, Outcome};

use std::io::Write;

/// Parses `argv`, runs, writes the report and returns the exit status.
/// Diagnostics go to `stderr`.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|config| {
        let outcome = run(&config)?;
        let bytes = emit(&outcome.report, config.format)?;
        match &config.out {
            Some(path) => std::fs::write(path, &bytes)?,
            None => stdout.write_all(&bytes)?,
        }
        Ok((outcome.status, outcome.report.summary.failed))
    });
    match result {
        Ok((status, failed)) => {
            if failed > 0 {
                let _ = writeln!(stderr, "bvpcf: {failed} pair(s) could not be analysed; see the report");
            }
            status
        }
        Err(CliError::Usage(e)) if error::is_informational(&e) => {
            let _ = write!(stdout, "{e}");
            error::EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "bvpcf: {e}");
            e.exit_code()
        }
    }
}
