//! Speedup grid: in-process evaluation versus writing files and launching an
//! external evaluator. Prints a TSV report.

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trevl::bench::{speedup_grid_with, write_report, BenchConfig, DEFAULT_MEASURES};

#[derive(Debug, Parser)]
#[command(name = "trevl-bench", version, about)]
struct Args {
    /// Comma-separated query counts.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    queries: Vec<usize>,
    /// Comma-separated documents per query.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
    docs: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Directory for the temporary run and qrel files.
    #[arg(long)]
    scratch: PathBuf,
    /// A `trec_eval`-compatible executable, such as `trevl`.
    #[arg(long)]
    external: PathBuf,
    /// Measures to compute; repeatable.
    #[arg(short = 'm', long = "measure")]
    measures: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let measures = if args.measures.is_empty() {
        DEFAULT_MEASURES.iter().map(|m| m.to_string()).collect()
    } else {
        args.measures
    };
    let config = BenchConfig {
        query_counts: args.queries,
        doc_counts: args.docs,
        repetitions: args.reps,
        scratch_dir: args.scratch,
        external: args.external,
        measures,
    };
    let result = speedup_grid_with(&config, |c| {
        eprintln!("{} x {}: {:.2}x", c.n_queries, c.n_docs, c.speedup());
    })
    .map_err(|e| e.to_string())
    .and_then(|cells| write_report(&cells, io::stdout().lock()).map_err(|e| e.to_string()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trevl-bench: {e}");
            ExitCode::from(2)
        }
    }
}
