use std::io::{BufRead, Write};

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::rng::{stream_rng, LengthSampler, Stream};
use super::{SynthConfig, SynthError};
use crate::Execution;

/// Documents as token-id sequences over a vocabulary `0..vocab_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCollection {
    documents: Vec<Vec<u32>>,
    target_lengths: Vec<usize>,
    vocab_size: usize,
    unigram_counts: Vec<u64>,
}

impl SyntheticCollection {
    /// Wraps existing documents; each document's target length is its length.
    pub fn from_documents(vocab_size: usize, documents: Vec<Vec<u32>>) -> Result<Self, SynthError> {
        if let Some(&bad) = documents
            .iter()
            .flatten()
            .find(|&&t| t as usize >= vocab_size)
        {
            return Err(SynthError::InvalidArgument(format!(
                "token {bad} outside vocabulary of size {vocab_size}"
            )));
        }
        let target_lengths = documents.iter().map(Vec::len).collect();
        Ok(Self::assemble(vocab_size, documents, target_lengths))
    }

    fn assemble(vocab_size: usize, documents: Vec<Vec<u32>>, target_lengths: Vec<usize>) -> Self {
        let mut unigram_counts = vec![0u64; vocab_size];
        for &t in documents.iter().flatten() {
            unigram_counts[t as usize] += 1;
        }
        Self {
            documents,
            target_lengths,
            vocab_size,
            unigram_counts,
        }
    }

    pub fn documents(&self) -> &[Vec<u32>] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Lengths the documents were sampled to reach before emission.
    pub fn target_lengths(&self) -> &[usize] {
        &self.target_lengths
    }

    /// Occurrences of each term across the collection.
    pub fn unigram_counts(&self) -> &[u64] {
        &self.unigram_counts
    }

    pub fn total_tokens(&self) -> u64 {
        self.unigram_counts.iter().sum()
    }

    /// Collection language model `P(w|D)`.
    pub fn collection_model(&self) -> Vec<f64> {
        let total = self.total_tokens() as f64;
        self.unigram_counts
            .iter()
            .map(|&c| if total > 0.0 { c as f64 / total } else { 0.0 })
            .collect()
    }

    pub fn mean_document_length(&self) -> f64 {
        self.total_tokens() as f64 / self.len().max(1) as f64
    }
}

/// Exponential draws, re-drawn until strictly positive.
fn positive_exp<R: Rng + ?Sized>(exp: &Exp<f64>, rng: &mut R) -> f64 {
    loop {
        let x = exp.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}

struct UnigramBase {
    pseudo_counts: Vec<f64>,
    total: f64,
    index: WeightedIndex<f64>,
}

/// Dense |V|×|V| bigram pseudo counts, row-major.
struct BigramBase {
    vocab_size: usize,
    pseudo_counts: Vec<f32>,
    row_sums: Vec<f64>,
    total: f64,
    rows: WeightedIndex<f64>,
}

impl BigramBase {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        let x = self.rows.sample(rng);
        let row = &self.pseudo_counts[x * self.vocab_size..(x + 1) * self.vocab_size];
        let target = rng.random::<f64>() * self.row_sums[x];
        let mut acc = 0.0;
        let mut last = 0;
        for (y, &w) in row.iter().enumerate() {
            acc += w as f64;
            last = y;
            if acc > target {
                break;
            }
        }
        (x as u32, last as u32)
    }
}

/// Collection-wide Dirichlet concentrations.
struct PseudoCounts {
    unigram: UnigramBase,
    bigram: Option<BigramBase>,
}

impl PseudoCounts {
    fn sample(config: &SynthConfig, exec: Execution) -> Result<Self, SynthError> {
        let v = config.vocab_size;
        let exp = Exp::new(config.exponential_rate)
            .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
        let mut rng = stream_rng(config.seed, Stream::UnigramPseudoCounts, 0);
        let pseudo_counts: Vec<f64> = (0..v).map(|_| positive_exp(&exp, &mut rng)).collect();
        let unigram = UnigramBase {
            total: pseudo_counts.iter().sum(),
            index: WeightedIndex::new(&pseudo_counts)
                .map_err(|e| SynthError::InvalidConfig(e.to_string()))?,
            pseudo_counts,
        };

        let bigram = if config.ngram_size_probs[1] > 0.0 {
            let rows: Vec<Vec<f32>> = exec.map_range(v, |x| {
                let mut rng = stream_rng(config.seed, Stream::BigramPseudoCounts, x as u64);
                (0..v)
                    .map(|_| (positive_exp(&exp, &mut rng) as f32).max(f32::MIN_POSITIVE))
                    .collect()
            });
            let row_sums: Vec<f64> = rows
                .iter()
                .map(|r| r.iter().map(|&w| w as f64).sum())
                .collect();
            Some(BigramBase {
                vocab_size: v,
                pseudo_counts: rows.concat(),
                total: row_sums.iter().sum(),
                rows: WeightedIndex::new(&row_sums)
                    .map_err(|e| SynthError::InvalidConfig(e.to_string()))?,
                row_sums,
            })
        } else {
            None
        };
        Ok(Self { unigram, bigram })
    }
}

/// Pólya-urn draw: with probability `total / (total + n)` from the base
/// measure, otherwise a uniform repeat of one of the `n` earlier draws. This
/// is a categorical draw from a Dirichlet(base) distribution with the
/// Dirichlet integrated out.
fn urn_draw<T: Copy, R: Rng + ?Sized>(
    history: &mut Vec<T>,
    total: f64,
    rng: &mut R,
    base: impl FnOnce(&mut R) -> T,
) -> T {
    let n = history.len();
    let item = if rng.random::<f64>() * (total + n as f64) < total {
        base(rng)
    } else {
        history[rng.random_range(0..n)]
    };
    history.push(item);
    item
}

fn sample_document<R: Rng + ?Sized>(
    target: usize,
    base: &PseudoCounts,
    unigram_prob: f64,
    rng: &mut R,
) -> Vec<u32> {
    let mut tokens = Vec::with_capacity(target);
    let mut unigrams: Vec<u32> = Vec::new();
    let mut bigrams: Vec<(u32, u32)> = Vec::new();
    while tokens.len() < target {
        match &base.bigram {
            Some(bigram) if rng.random::<f64>() >= unigram_prob => {
                let (x, y) = urn_draw(&mut bigrams, bigram.total, rng, |r| bigram.sample(r));
                tokens.push(x);
                // Truncate a bigram that would overrun the target length.
                if tokens.len() < target {
                    tokens.push(y);
                }
            }
            _ => {
                let uni = &base.unigram;
                let w = urn_draw(&mut unigrams, uni.total, rng, |r| {
                    uni.index.sample(r) as u32
                });
                tokens.push(w);
            }
        }
    }
    tokens
}

pub fn sample_collection(config: &SynthConfig) -> Result<SyntheticCollection, SynthError> {
    sample_collection_with(config, Execution::default())
}

/// Samples `collection_size` documents. Lengths follow a zero-truncated
/// Poisson with mean `mean_doc_length`; each emission first picks an n-gram
/// size, then an n-gram from the document's unigram or bigram model.
pub fn sample_collection_with(
    config: &SynthConfig,
    exec: Execution,
) -> Result<SyntheticCollection, SynthError> {
    config.validate()?;
    let base = PseudoCounts::sample(config, exec)?;
    debug_assert!(base.unigram.pseudo_counts.iter().all(|&a| a > 0.0));
    let lengths = LengthSampler::with_mean(config.mean_doc_length)?;
    let docs: Vec<(usize, Vec<u32>)> = exec.map_range(config.collection_size, |d| {
        let mut rng = stream_rng(config.seed, Stream::Document, d as u64);
        let target = lengths.sample(&mut rng);
        (
            target,
            sample_document(target, &base, config.ngram_size_probs[0], &mut rng),
        )
    });
    let (target_lengths, documents) = docs.into_iter().unzip();
    Ok(SyntheticCollection::assemble(
        config.vocab_size,
        documents,
        target_lengths,
    ))
}

/// One line per document: space-separated token ids.
pub fn write_collection<W: Write>(
    collection: &SyntheticCollection,
    mut out: W,
) -> std::io::Result<()> {
    for doc in collection.documents() {
        let line: Vec<String> = doc.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()
}

pub fn read_collection<R: BufRead>(
    reader: R,
    vocab_size: usize,
) -> Result<SyntheticCollection, SynthError> {
    let docs = super::queries::read_token_lines(reader)?;
    SyntheticCollection::from_documents(vocab_size, docs)
}
