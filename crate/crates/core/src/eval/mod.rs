//! The evaluation engine: ranking semantics and measures following
//! `trec_eval`.
//!
//! Runs are scored documents, not ordered lists. [`rank_documents`] sorts by
//! score descending and breaks ties by document id in descending byte order,
//! which is what `trec_eval` does internally. Documents missing from the
//! judgments count as non-relevant; judged documents missing from the run
//! still count toward the number of relevant documents and the ideal DCG.

mod collections;
mod evaluator;
mod measures;
mod ranking;
mod selection;

pub use collections::{DocScores, Judgments, QrelSet, RunSet};
pub use evaluator::{aggregate, AggregateMode, Evaluator, ResultSet};
pub use measures::{average_precision, ndcg, precision_at_k, reciprocal_rank};
pub use ranking::{rank_documents, OrderedRanking, RankedDoc};
pub use selection::{supported_measures, Measure, MeasureSelection, DEFAULT_CUTOFFS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("non-finite score {score} for document {doc:?}")]
    NonFiniteScore { doc: String, score: f64 },
    #[error("duplicate document {doc:?} for query {query:?}")]
    DuplicateDocument { query: String, doc: String },
    #[error("unknown measure {name:?}; supported measures: {}", supported_list())]
    UnknownMeasure { name: String },
    #[error("invalid cutoff {value:?} for measure {measure:?}")]
    InvalidCutoff { measure: String, value: String },
    #[error("no measures selected")]
    EmptySelection,
    #[error("no queries to aggregate")]
    EmptyAggregate,
}

fn supported_list() -> String {
    supported_measures()
        .into_iter()
        .collect::<Vec<_>>()
        .join(", ")
}
