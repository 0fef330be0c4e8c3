//! In-process retrieval evaluation with trec_eval semantics.
//!
//! The crate is organized around the evaluation engine in [`eval`]:
//!
//! - [`trec_io`] reads and writes TREC run/qrel files and formats results
//!   the way `trec_eval` prints them.
//! - [`cli`] is the `trevl` command-line front end.
//! - [`bench`] times in-process evaluation against a serialize-invoke-parse
//!   workflow driving an external evaluator.
//! - [`synth`] generates synthetic test collections and ranks them with a
//!   Dirichlet-smoothed query-likelihood model.
//! - [`gym`] is a query-expansion environment with a tabular Q-learning agent
//!   rewarded by the change in NDCG.
//!
//! Data-parallel loops go through [`Execution`]; with the `parallel` feature
//! (on by default) they run on rayon, otherwise sequentially.
//!
//! ```
//! use trevl::{aggregate, AggregateMode, Evaluator, QrelSet, RunSet};
//!
//! # fn main() -> Result<(), trevl::EvalError> {
//! let qrel = QrelSet::from_queries([("q1", vec![("d1", 1), ("d2", 0)]), ("q2", vec![("d2", 1)])])?;
//! let run = RunSet::from_queries([
//!     ("q1", vec![("d1", 0.5), ("d2", 2.0)]),
//!     ("q2", vec![("d1", 0.5), ("d2", 0.6)]),
//! ])?;
//! let results = Evaluator::with_measures(qrel, ["map", "ndcg"])?.evaluate(&run)?;
//! assert_eq!(results.get("q1", "map"), Some(0.5));
//! let summary = aggregate(&results, AggregateMode::JudgedOnly)?;
//! assert_eq!(summary["map"], 0.75);
//! # Ok(())
//! # }
//! ```

pub mod bench;
pub mod cli;
pub mod eval;
mod exec;
pub mod gym;
pub mod synth;
pub mod trec_io;

pub use eval::{
    aggregate, average_precision, ndcg, precision_at_k, rank_documents, supported_measures,
    AggregateMode, EvalError, Evaluator, Judgments, MeasureSelection, OrderedRanking, QrelSet,
    ResultSet, RunSet,
};
pub use exec::Execution;
