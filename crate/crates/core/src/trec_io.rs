//! TREC run and qrel files, and `trec_eval`-style result text.
//!
//! Run lines are `<qid> <literal> <docid> <rank> <score> <tag>`; qrel lines
//! are `<qid> <iter> <docid> <rel>`. Fields are separated by any run of
//! spaces or tabs. Blank lines are skipped. The literal, rank, iteration and
//! tag fields are read but ignored: only scores decide rank.

use std::io::{self, BufRead, Write};

use indexmap::IndexMap;
use thiserror::Error;

use crate::eval::{EvalError, QrelSet, ResultSet, RunSet};

#[derive(Debug, Error)]
pub enum TrecError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid score {value:?}")]
    InvalidScore { line: usize, value: String },
    #[error("line {line}: invalid relevance {value:?}")]
    InvalidRelevance { line: usize, value: String },
    #[error("line {line}: duplicate document {doc:?} for query {query:?}")]
    Duplicate {
        line: usize,
        query: String,
        doc: String,
    },
    #[error("line {line}: not valid UTF-8")]
    Encoding { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl TrecError {
    /// 1-based line number of the offending record, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            TrecError::FieldCount { line, .. }
            | TrecError::InvalidScore { line, .. }
            | TrecError::InvalidRelevance { line, .. }
            | TrecError::Duplicate { line, .. }
            | TrecError::Encoding { line } => Some(*line),
            TrecError::Io(_) => None,
        }
    }
}

/// Calls `f(line_number, fields)` for every non-blank line.
fn for_each_record<R, F>(mut reader: R, expected: usize, mut f: F) -> Result<(), TrecError>
where
    R: BufRead,
    F: FnMut(usize, &[&str]) -> Result<(), TrecError>,
{
    let mut buf = Vec::new();
    let mut line = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            return Ok(());
        }
        line += 1;
        let text = std::str::from_utf8(&buf).map_err(|_| TrecError::Encoding { line })?;
        let mut fields = [""; 8];
        let mut found = 0;
        for token in text.split_ascii_whitespace() {
            if let Some(slot) = fields.get_mut(found) {
                *slot = token;
            }
            found += 1;
        }
        if found == 0 {
            continue;
        }
        if found != expected {
            return Err(TrecError::FieldCount {
                line,
                expected,
                found,
            });
        }
        f(line, &fields[..found])?;
    }
}

fn duplicate(line: usize, err: EvalError) -> TrecError {
    match err {
        EvalError::DuplicateDocument { query, doc } => TrecError::Duplicate { line, query, doc },
        other => unreachable!("insert only fails on duplicates here: {other}"),
    }
}

pub fn parse_run<R: BufRead>(reader: R) -> Result<RunSet, TrecError> {
    let mut run = RunSet::new();
    for_each_record(reader, 6, |line, f| {
        let score = f[4]
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite())
            .ok_or_else(|| TrecError::InvalidScore {
                line,
                value: f[4].to_string(),
            })?;
        run.insert(f[0], f[2], score)
            .map_err(|e| duplicate(line, e))
    })?;
    Ok(run)
}

pub fn parse_qrel<R: BufRead>(reader: R) -> Result<QrelSet, TrecError> {
    let mut qrel = QrelSet::new();
    for_each_record(reader, 4, |line, f| {
        let rel = f[3]
            .parse::<i64>()
            .map_err(|_| TrecError::InvalidRelevance {
                line,
                value: f[3].to_string(),
            })?;
        qrel.insert(f[0], f[2], rel).map_err(|e| duplicate(line, e))
    })?;
    Ok(qrel)
}

/// Six decimals when that reads back as the same value, otherwise the
/// shortest representation that does.
pub(crate) fn format_score(score: f64) -> String {
    let fixed = format!("{score:.6}");
    if fixed.parse::<f64>() == Ok(score) {
        fixed
    } else {
        format!("{score}")
    }
}

/// Writes one line per scored document in insertion order, without sorting.
/// The rank field counts from 1 within each query.
pub fn write_run<W: Write>(run: &RunSet, tag: &str, mut out: W) -> io::Result<()> {
    for (query, scores) in run.iter() {
        for (rank, (doc, &score)) in scores.iter().enumerate() {
            writeln!(
                out,
                "{query} Q0 {doc} {} {} {tag}",
                rank + 1,
                format_score(score)
            )?;
        }
    }
    out.flush()
}

/// Writes one `<qid> 0 <docid> <rel>` line per judgment in insertion order.
pub fn write_qrel<W: Write>(qrel: &QrelSet, mut out: W) -> io::Result<()> {
    for (query, judgments) in qrel.iter() {
        for (doc, rel) in judgments {
            writeln!(out, "{query} 0 {doc} {rel}")?;
        }
    }
    out.flush()
}

/// Renders results as `measure\tquery\tvalue` lines.
///
/// Per-query lines (queries ascending, measures in selection order) come
/// first when `per_query` is set, followed by one `all` line per aggregate.
pub fn format_results(
    results: &ResultSet,
    aggregates: &IndexMap<String, f64>,
    per_query: bool,
) -> String {
    let mut out = String::new();
    if per_query {
        for (query, values) in results.iter() {
            for (measure, value) in results.measure_ids().iter().zip(values) {
                out.push_str(&format!("{measure}\t{query}\t{value:.4}\n"));
            }
        }
    }
    for (measure, value) in aggregates {
        out.push_str(&format!("{measure}\tall\t{value:.4}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{aggregate, AggregateMode, Evaluator};

    fn run_from(text: &str) -> Result<RunSet, TrecError> {
        parse_run(text.as_bytes())
    }

    #[test]
    fn parses_run_fields() {
        let run = run_from("q1 Q0 d2 1 2.0 tag\n").unwrap();
        assert_eq!(
            run,
            RunSet::from_queries([("q1", vec![("d2", 2.0)])]).unwrap()
        );
    }

    #[test]
    fn empty_inputs() {
        assert!(run_from("").unwrap().is_empty());
        assert!(parse_qrel("".as_bytes()).unwrap().is_empty());
        assert!(run_from("\n  \n\t\n").unwrap().is_empty());
    }

    #[test]
    fn rank_field_is_ignored() {
        let a = run_from("q1 Q0 a 1 1.0 t\nq1 Q0 b 2 2.0 t\n").unwrap();
        let b = run_from("q1 Q0 b 9 2.0 t\nq1 Q0 a 3 1.0 t\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn whitespace_tolerant() {
        let run = run_from("  q1\tQ0   d1 1 \t0.5 x  \r\n").unwrap();
        assert_eq!(run.get("q1").unwrap()["d1"], 0.5);
    }

    #[test]
    fn field_count_errors_carry_line_numbers() {
        let err = run_from("q1 Q0 d1 1 0.5 t\n\nq1 Q0 d2 1 0.5\n").unwrap_err();
        assert!(matches!(
            err,
            TrecError::FieldCount {
                line: 3,
                expected: 6,
                found: 5
            }
        ));
        assert_eq!(err.line(), Some(3));
        assert!(matches!(
            parse_qrel("q1 0 d1 1 extra\n".as_bytes()),
            Err(TrecError::FieldCount { line: 1, .. })
        ));
    }

    #[test]
    fn bad_scores_rejected() {
        assert!(matches!(
            run_from("q1 Q0 d1 1 high t\n"),
            Err(TrecError::InvalidScore { line: 1, .. })
        ));
        assert!(matches!(
            run_from("q1 Q0 d1 1 nan t\n"),
            Err(TrecError::InvalidScore { .. })
        ));
        assert!(matches!(
            run_from("q1 Q0 d1 1 inf t\n"),
            Err(TrecError::InvalidScore { .. })
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let err = run_from("q1 Q0 d1 1 0.5 t\nq1 Q0 d1 2 0.4 t\n").unwrap_err();
        assert!(matches!(err, TrecError::Duplicate { line: 2, .. }));
        let err = parse_qrel("q 0 d 1\nq 0 d 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TrecError::Duplicate { line: 2, .. }));
    }

    #[test]
    fn invalid_utf8_rejected() {
        assert!(matches!(
            parse_run(&b"q1 Q0 d\xff 1 0.5 t\n"[..]),
            Err(TrecError::Encoding { line: 1 })
        ));
    }

    #[test]
    fn parses_qrel_including_negative_levels() {
        let qrel = parse_qrel("q1 0 d1 1\nq1 0 d2 -1\n".as_bytes()).unwrap();
        assert_eq!(qrel.get("q1").unwrap()["d1"], 1);
        assert_eq!(qrel.get("q1").unwrap()["d2"], -1);
        assert!(matches!(
            parse_qrel("q1 0 d1 1.5\n".as_bytes()),
            Err(TrecError::InvalidRelevance { .. })
        ));
    }

    #[test]
    fn writes_run_lines() {
        let mut out = Vec::new();
        let run = RunSet::from_queries([("q1", vec![("d2", 2.0)])]).unwrap();
        write_run(&run, "tag", &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "q1 Q0 d2 1 2.000000 tag\n");

        let mut out = Vec::new();
        write_run(&RunSet::new(), "tag", &mut out).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn rank_counter_follows_insertion_order() {
        let run = RunSet::from_queries([("q", vec![("c", 1.0), ("a", 3.0), ("b", 2.0)])]).unwrap();
        let mut out = Vec::new();
        write_run(&run, "t", &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<(&str, &str)> = text
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split(' ').collect();
                (f[2], f[3])
            })
            .collect();
        assert_eq!(rows, [("c", "1"), ("a", "2"), ("b", "3")]);
    }

    #[test]
    fn score_format_is_lossless() {
        assert_eq!(format_score(2.0), "2.000000");
        assert_eq!(format_score(-0.125), "-0.125000");
        let awkward = 0.1 + 0.2;
        assert_eq!(format_score(awkward).parse::<f64>().unwrap(), awkward);
        assert_eq!(format_score(1e-12).parse::<f64>().unwrap(), 1e-12);
    }

    #[test]
    fn qrel_round_trip() {
        let qrel =
            QrelSet::from_queries([("q1", vec![("d1", 1), ("d2", -1)]), ("q2", vec![("d9", 3)])])
                .unwrap();
        let mut out = Vec::new();
        write_qrel(&qrel, &mut out).unwrap();
        assert_eq!(parse_qrel(&out[..]).unwrap(), qrel);
    }

    fn two_query_results() -> ResultSet {
        let qrel = parse_qrel("q1 0 d1 1\nq1 0 d2 0\nq2 0 d2 1\n".as_bytes()).unwrap();
        let run =
            run_from("q1 Q0 d1 1 0.5 t\nq1 Q0 d2 2 2.0 t\nq2 Q0 d1 1 0.5 t\nq2 Q0 d2 2 0.6 t\n")
                .unwrap();
        Evaluator::with_measures(qrel, ["map", "ndcg"])
            .unwrap()
            .evaluate(&run)
            .unwrap()
    }

    #[test]
    fn formats_aggregates_only() {
        let res = two_query_results();
        let agg = aggregate(&res, AggregateMode::JudgedOnly).unwrap();
        let text = format_results(&res, &agg, false);
        assert_eq!(text, "map\tall\t0.7500\nndcg\tall\t0.8155\n");
    }

    #[test]
    fn formats_per_query_before_all() {
        let res = two_query_results();
        let agg = aggregate(&res, AggregateMode::JudgedOnly).unwrap();
        let text = format_results(&res, &agg, true);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            [
                "map\tq1\t0.5000",
                "ndcg\tq1\t0.6309",
                "map\tq2\t1.0000",
                "ndcg\tq2\t1.0000",
                "map\tall\t0.7500",
                "ndcg\tall\t0.8155",
            ]
        );
    }
}
