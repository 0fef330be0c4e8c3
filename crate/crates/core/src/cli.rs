//! The `trevl` command: a `trec_eval`-compatible front end.
//!
//! ```text
//! trevl [-q] [-c] [-M depth] -m <measure> ... <qrel-file> <run-file>
//! ```
//!
//! Exit status is 0 when at least one query was evaluated and 2 on usage,
//! I/O or parse errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser};

use crate::eval::{aggregate, AggregateMode, Evaluator, MeasureSelection, ResultSet};
use crate::trec_io::{format_results, parse_qrel, parse_run, TrecError};
use crate::Execution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "trevl",
    version,
    about = "Evaluate a TREC run against relevance judgments"
)]
pub struct CliConfig {
    /// Print per-query values before the summary.
    #[arg(short = 'q')]
    pub per_query: bool,

    /// Average over every judged query, counting queries missing from the
    /// run as 0.
    #[arg(short = 'c')]
    pub complete: bool,

    /// Evaluate at most this many documents per query.
    #[arg(short = 'M', value_name = "depth", default_value_t = 1000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,

    /// Measure to compute; repeatable. `P.5,10` restricts cutoffs, `all`
    /// selects every supported measure.
    #[arg(short = 'm', value_name = "measure", action = ArgAction::Append, required = true)]
    pub measures: Vec<String>,

    pub qrel_file: PathBuf,

    pub run_file: PathBuf,
}

/// Evaluates the files named by `config` and returns the text `trevl`
/// prints on success.
pub fn evaluate_files(config: &CliConfig) -> Result<String, String> {
    let selection = MeasureSelection::parse(&config.measures).map_err(|e| e.to_string())?;
    let qrel = read_file(&config.qrel_file, parse_qrel)?;
    let run = read_file(&config.run_file, parse_run)?;
    let evaluator = Evaluator::new(qrel, selection).with_depth(Some(config.depth as usize));
    let results = evaluator
        .evaluate_with(&run, Execution::Sequential)
        .map_err(|e| e.to_string())?;
    render(&results, config)
}

fn render(results: &ResultSet, config: &CliConfig) -> Result<String, String> {
    let mode = if config.complete {
        AggregateMode::Complete
    } else {
        AggregateMode::JudgedOnly
    };
    let aggregates = aggregate(results, mode)
        .map_err(|_| "no queries in the run match the relevance judgments".to_string())?;
    Ok(format_results(results, &aggregates, config.per_query))
}

fn read_file<T>(
    path: &Path,
    parse: impl FnOnce(BufReader<File>) -> Result<T, TrecError>,
) -> Result<T, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs the command with `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return if status == 0 { EXIT_OK } else { EXIT_ERROR };
        }
    };
    match evaluate_files(&config) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "trevl: {e}");
                EXIT_ERROR
            }
        },
        Err(msg) => {
            let _ = writeln!(err, "trevl: {msg}");
            EXIT_ERROR
        }
    }
}
