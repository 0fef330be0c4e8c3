//! Timing harness comparing in-process evaluation with the
//! serialize-invoke-parse workflow around an external `trec_eval`-compatible
//! executable.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::eval::{EvalError, Evaluator, MeasureSelection, QrelSet, RunSet};
use crate::trec_io::{write_qrel, write_run};

/// Measures timed by default.
pub const DEFAULT_MEASURES: [&str; 2] = ["map", "ndcg"];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error("could not launch {path}: {source}")]
    Launch {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} exited with {status}: {stderr}")]
    ExternalFailed {
        path: PathBuf,
        status: std::process::ExitStatus,
        stderr: String,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub query_counts: Vec<usize>,
    pub doc_counts: Vec<usize>,
    pub repetitions: usize,
    pub scratch_dir: PathBuf,
    pub external: PathBuf,
    pub measures: Vec<String>,
}

impl BenchConfig {
    pub fn new(scratch_dir: impl Into<PathBuf>, external: impl Into<PathBuf>) -> Self {
        Self {
            query_counts: vec![1, 10, 100],
            doc_counts: vec![1, 10, 100, 1000],
            repetitions: 20,
            scratch_dir: scratch_dir.into(),
            external: external.into(),
            measures: DEFAULT_MEASURES.iter().map(|m| m.to_string()).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::InvalidConfig(m.to_owned()));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.query_counts.is_empty() || self.doc_counts.is_empty() {
            return bad("query and document counts must be non-empty");
        }
        if self.query_counts.contains(&0) || self.doc_counts.contains(&0) {
            return bad("query and document counts must be at least 1");
        }
        MeasureSelection::parse(&self.measures)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedupCell {
    pub n_queries: usize,
    pub n_docs: usize,
    pub in_process_secs: f64,
    pub subprocess_secs: f64,
}

impl SpeedupCell {
    pub fn speedup(&self) -> f64 {
        self.subprocess_secs / self.in_process_secs
    }
}

/// `n_queries` queries of `n_docs` documents each, scored `n_docs` down to 1
/// and all judged relevant at level 1.
pub fn synthesize_workload(n_queries: usize, n_docs: usize) -> (QrelSet, RunSet) {
    let mut qrel = QrelSet::new();
    let mut run = RunSet::new();
    for q in 0..n_queries {
        let qid = format!("q{q}");
        for d in 0..n_docs {
            let doc = format!("d{d}");
            qrel.insert(qid.clone(), doc.clone(), 1)
                .expect("distinct ids");
            run.insert(qid.clone(), doc, (n_docs - d) as f64)
                .expect("distinct ids");
        }
    }
    (qrel, run)
}

fn mean_secs(samples: &[Duration]) -> f64 {
    // Floor at 1ns so ratios stay finite on coarse clocks.
    let total: f64 = samples.iter().map(Duration::as_secs_f64).sum();
    (total / samples.len() as f64).max(1e-9)
}

/// Mean wall time of building an evaluator and evaluating `run`, after one
/// untimed warm-up.
pub fn time_in_process(
    qrel: &QrelSet,
    run: &RunSet,
    measures: &[String],
    repetitions: usize,
) -> Result<f64, BenchError> {
    let selection = MeasureSelection::parse(measures)?;
    let once = || -> Result<Duration, BenchError> {
        let start = Instant::now();
        let evaluator = Evaluator::new(qrel.clone(), selection.clone());
        let results = evaluator.evaluate(run)?;
        std::hint::black_box(&results);
        Ok(start.elapsed())
    };
    once()?;
    let samples = (0..repetitions.max(1))
        .map(|_| once())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mean_secs(&samples))
}

/// Writes the workload to `scratch`, runs `external -q -m <measure>... qrel
/// run`, and returns its standard output. The files are removed afterwards.
pub fn run_external(
    qrel: &QrelSet,
    run: &RunSet,
    measures: &[String],
    scratch: &Path,
    external: &Path,
) -> Result<String, BenchError> {
    let tag = std::process::id();
    let qrel_path = scratch.join(format!("bench-{tag}.qrel"));
    let run_path = scratch.join(format!("bench-{tag}.run"));
    let result = (|| {
        write_qrel(qrel, BufWriter::new(File::create(&qrel_path)?))?;
        write_run(run, "bench", BufWriter::new(File::create(&run_path)?))?;
        let mut cmd = Command::new(external);
        cmd.arg("-q");
        for m in measures {
            cmd.arg("-m").arg(m);
        }
        let output = cmd
            .arg(&qrel_path)
            .arg(&run_path)
            .output()
            .map_err(|source| BenchError::Launch {
                path: external.to_owned(),
                source,
            })?;
        if !output.status.success() {
            return Err(BenchError::ExternalFailed {
                path: external.to_owned(),
                status: output.status,
                stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
            });
        }
        Ok(String::from_utf8_lossy(&output.stdout).into_owned())
    })();
    let _ = fs::remove_file(&qrel_path);
    let _ = fs::remove_file(&run_path);
    result
}

/// Mean wall time of the full write, launch and read cycle, after one
/// untimed warm-up.
pub fn time_subprocess_workflow(
    qrel: &QrelSet,
    run: &RunSet,
    measures: &[String],
    repetitions: usize,
    scratch: &Path,
    external: &Path,
) -> Result<f64, BenchError> {
    let once = || -> Result<Duration, BenchError> {
        let start = Instant::now();
        let stdout = run_external(qrel, run, measures, scratch, external)?;
        std::hint::black_box(&stdout);
        Ok(start.elapsed())
    };
    once()?;
    let samples = (0..repetitions.max(1))
        .map(|_| once())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mean_secs(&samples))
}

/// Times every (query count, document count) pair, calling `progress` after
/// each cell.
pub fn speedup_grid_with(
    config: &BenchConfig,
    mut progress: impl FnMut(&SpeedupCell),
) -> Result<Vec<SpeedupCell>, BenchError> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n_queries in &config.query_counts {
        for &n_docs in &config.doc_counts {
            let (qrel, run) = synthesize_workload(n_queries, n_docs);
            let in_process_secs =
                time_in_process(&qrel, &run, &config.measures, config.repetitions)?;
            let subprocess_secs = time_subprocess_workflow(
                &qrel,
                &run,
                &config.measures,
                config.repetitions,
                &config.scratch_dir,
                &config.external,
            )?;
            let cell = SpeedupCell {
                n_queries,
                n_docs,
                in_process_secs,
                subprocess_secs,
            };
            progress(&cell);
            cells.push(cell);
        }
    }
    Ok(cells)
}

pub fn speedup_grid(config: &BenchConfig) -> Result<Vec<SpeedupCell>, BenchError> {
    speedup_grid_with(config, |_| {})
}

/// Comment line, column header, then one row per cell.
pub fn write_report<W: Write>(cells: &[SpeedupCell], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "# in-process time includes evaluator construction; times in seconds"
    )?;
    writeln!(out, "n_queries\tn_docs\tt_inproc\tt_subproc\tspeedup")?;
    for c in cells {
        writeln!(
            out,
            "{}\t{}\t{:.6e}\t{:.6e}\t{:.2}",
            c.n_queries,
            c.n_docs,
            c.in_process_secs,
            c.subprocess_secs,
            c.speedup()
        )?;
    }
    out.flush()
}
