use std::io::{BufRead, Write};

use rand::distr::weighted::WeightedIndex;
use rand::seq::index;
use rand_distr::Distribution;

use super::rng::{stream_rng, LengthSampler, Stream};
use super::{SynthConfig, SynthError, SyntheticCollection};
use crate::eval::QrelSet;
use crate::trec_io;
use crate::Execution;

const MAX_RELEVANT_SET_ATTEMPTS: usize = 32;

/// Queries with their relevant document sets.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryCollection {
    queries: Vec<Vec<u32>>,
    relevant: Vec<Vec<usize>>,
    doc_id_width: usize,
}

impl QueryCollection {
    /// `relevant[i]` lists document indices; `collection_size` fixes the
    /// width of the document ids used in the qrel.
    pub fn new(queries: Vec<Vec<u32>>, relevant: Vec<Vec<usize>>, collection_size: usize) -> Self {
        assert_eq!(queries.len(), relevant.len());
        Self {
            queries,
            relevant,
            doc_id_width: doc_id_width(collection_size),
        }
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn terms(&self, query: usize) -> &[u32] {
        &self.queries[query]
    }

    pub fn queries(&self) -> &[Vec<u32>] {
        &self.queries
    }

    /// Relevant document indices of `query`, ascending.
    pub fn relevant(&self, query: usize) -> &[usize] {
        &self.relevant[query]
    }

    pub fn query_id(query: usize) -> String {
        format!("q{query}")
    }

    pub fn mean_query_length(&self) -> f64 {
        let total: usize = self.queries.iter().map(Vec::len).sum();
        total as f64 / self.len().max(1) as f64
    }

    /// Judgments with relevance 1 for every relevant document.
    pub fn qrel(&self) -> QrelSet {
        let mut qrel = QrelSet::new();
        for (q, docs) in self.relevant.iter().enumerate() {
            for &d in docs {
                qrel.insert(Self::query_id(q), doc_id(d, self.doc_id_width), 1)
                    .expect("relevant sets hold distinct documents");
            }
        }
        qrel
    }
}

/// Digits needed for the largest index, so ids sort like their indices.
pub(crate) fn doc_id_width(collection_size: usize) -> usize {
    collection_size.saturating_sub(1).max(1).to_string().len()
}

pub(crate) fn doc_id(index: usize, width: usize) -> String {
    format!("d{index:0width$}")
}

pub fn sample_queries(
    collection: &SyntheticCollection,
    config: &SynthConfig,
) -> Result<QueryCollection, SynthError> {
    sample_queries_with(collection, config, Execution::default())
}

/// Samples `query_count` queries. Each picks `relevant_per_query` documents
/// uniformly, then draws terms with replacement with weight
/// `P(w|R) * (1 - P(w|D))`, where `P(w|R)` is the empirical model of the
/// concatenated relevant documents and `P(w|D)` the collection model.
pub fn sample_queries_with(
    collection: &SyntheticCollection,
    config: &SynthConfig,
    exec: Execution,
) -> Result<QueryCollection, SynthError> {
    if collection.is_empty() || collection.total_tokens() == 0 {
        return Err(SynthError::EmptyCollection);
    }
    let n_docs = collection.len();
    let r = config.relevant_per_query;
    if r == 0 || r > n_docs {
        return Err(SynthError::InvalidConfig(format!(
            "relevant_per_query {r} must be in 1..={n_docs}"
        )));
    }
    let lengths = LengthSampler::with_mean(config.mean_query_length)?;
    let collection_model = collection.collection_model();

    let sampled = exec.map_range(config.query_count, |q| {
        let mut rng = stream_rng(config.seed, Stream::Query, q as u64);
        let mut counts = vec![0u32; collection.vocab_size()];
        for _ in 0..MAX_RELEVANT_SET_ATTEMPTS {
            let mut relevant = index::sample(&mut rng, n_docs, r).into_vec();
            relevant.sort_unstable();

            counts.iter_mut().for_each(|c| *c = 0);
            let mut total = 0u64;
            for &d in &relevant {
                for &t in &collection.documents()[d] {
                    counts[t as usize] += 1;
                    total += 1;
                }
            }
            if total == 0 {
                continue;
            }
            let mut terms = Vec::new();
            let mut weights = Vec::new();
            for (t, &c) in counts.iter().enumerate() {
                let w = (c as f64 / total as f64) * (1.0 - collection_model[t]);
                if w > 0.0 {
                    terms.push(t as u32);
                    weights.push(w);
                }
            }
            let Ok(dist) = WeightedIndex::new(&weights) else {
                continue;
            };
            let len = lengths.sample(&mut rng);
            let query: Vec<u32> = (0..len).map(|_| terms[dist.sample(&mut rng)]).collect();
            return Ok((query, relevant));
        }
        Err(SynthError::DegenerateQuery { query: q })
    });
    let (queries, relevant) = sampled
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    Ok(QueryCollection::new(queries, relevant, n_docs))
}

pub(crate) fn read_token_lines<R: BufRead>(reader: R) -> Result<Vec<Vec<u32>>, SynthError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let tokens = line
            .split_ascii_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| SynthError::Format {
                line: i + 1,
                message: e.to_string(),
            })?;
        out.push(tokens);
    }
    Ok(out)
}

/// One line of token ids per query. Relevant sets are written separately as
/// a qrel (see [`QueryCollection::qrel`]).
pub fn write_queries<W: Write>(queries: &QueryCollection, mut out: W) -> std::io::Result<()> {
    for q in queries.queries() {
        let line: Vec<String> = q.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()
}

/// Reads queries written by [`write_queries`] and relevant sets from a qrel
/// using this module's `q<i>` / `d<index>` ids.
pub fn read_queries<Q: BufRead, J: BufRead>(
    query_lines: Q,
    qrel: J,
    collection_size: usize,
) -> Result<QueryCollection, SynthError> {
    let queries = read_token_lines(query_lines)?;
    let qrel = trec_io::parse_qrel(qrel).map_err(|e| SynthError::Format {
        line: e.line().unwrap_or(0),
        message: e.to_string(),
    })?;
    let mut relevant = vec![Vec::new(); queries.len()];
    for (qid, judgments) in qrel.iter() {
        let q = parse_index(qid, 'q', queries.len())?;
        for (doc, &rel) in judgments {
            if rel > 0 {
                relevant[q].push(parse_index(doc, 'd', collection_size)?);
            }
        }
        relevant[q].sort_unstable();
    }
    Ok(QueryCollection::new(queries, relevant, collection_size))
}

fn parse_index(id: &str, prefix: char, bound: usize) -> Result<usize, SynthError> {
    id.strip_prefix(prefix)
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&i| i < bound)
        .ok_or_else(|| SynthError::Format {
            line: 0,
            message: format!("unexpected id {id:?}"),
        })
}
