//! Synthetic test collections and a query-likelihood retriever over them.
//!
//! Documents are pseudo-text: token ids drawn from per-document unigram and
//! bigram language models, which are themselves Dirichlet draws around
//! collection-wide pseudo counts.
//! Queries pick a set of relevant documents and sample terms that are likely
//! in those documents but rare in the collection.
//!
//! Every sampler is a pure function of the configuration and its seed. Work
//! is split into independently seeded streams (one per document, per query,
//! per bigram row), so parallel and sequential execution produce the same
//! collection.

mod collection;
mod config;
mod index;
mod queries;
mod rng;

pub use collection::{
    read_collection, sample_collection, sample_collection_with, write_collection,
    SyntheticCollection,
};
pub use config::SynthConfig;
pub use index::{build_index, retrieve, Index, SMOOTHING_FLOOR};
pub use queries::{
    read_queries, sample_queries, sample_queries_with, write_queries, QueryCollection,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "bigram table needs {needed} bytes but the budget is {budget}; \
         lower vocab_size or raise bigram_budget_mib"
    )]
    BigramBudget { needed: u64, budget: u64 },
    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("could not find relevant documents with a usable term distribution for query {query}")]
    DegenerateQuery { query: usize },
    #[error("collection has no tokens")]
    EmptyCollection,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
