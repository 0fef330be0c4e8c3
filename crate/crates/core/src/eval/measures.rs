//! Measure kernels. Each kernel takes the relevance level of the document at
//! every rank (unjudged documents as 0) so a ranking is resolved against the
//! judgments once per query.

use super::{Judgments, OrderedRanking};

pub(crate) fn relevance_by_rank<'a>(
    docs: impl Iterator<Item = &'a str>,
    judgments: &Judgments,
) -> Vec<i64> {
    docs.map(|d| judgments.get(d).copied().unwrap_or(0))
        .collect()
}

/// Gains of all judged-relevant documents, best first.
pub(crate) fn ideal_gains(judgments: &Judgments) -> Vec<i64> {
    let mut gains: Vec<i64> = judgments.values().copied().filter(|&r| r > 0).collect();
    gains.sort_unstable_by(|a, b| b.cmp(a));
    gains
}

pub(crate) fn average_precision_kernel(rels: &[i64], num_rel: usize) -> f64 {
    if num_rel == 0 {
        return 0.0;
    }
    let mut rel_so_far = 0usize;
    let mut sum = 0.0;
    for (i, &rel) in rels.iter().enumerate() {
        if rel > 0 {
            rel_so_far += 1;
            sum += rel_so_far as f64 / (i + 1) as f64;
        }
    }
    sum / num_rel as f64
}

/// Linear gain, 1/log2(rank + 1) discount.
pub(crate) fn dcg(gains: &[i64], cutoff: Option<usize>) -> f64 {
    let depth = cutoff.map_or(gains.len(), |k| k.min(gains.len()));
    let mut sum = 0.0;
    for (i, &gain) in gains[..depth].iter().enumerate() {
        if gain > 0 {
            sum += gain as f64 / ((i + 2) as f64).log2();
        }
    }
    sum
}

pub(crate) fn ndcg_kernel(rels: &[i64], ideal: &[i64], cutoff: Option<usize>) -> f64 {
    let ideal_dcg = dcg(ideal, cutoff);
    if ideal_dcg <= 0.0 {
        return 0.0;
    }
    dcg(rels, cutoff) / ideal_dcg
}

/// Denominator is always `k`, even when fewer documents were retrieved.
pub(crate) fn precision_kernel(rels: &[i64], k: usize) -> f64 {
    let hits = rels.iter().take(k).filter(|&&r| r > 0).count();
    hits as f64 / k as f64
}

pub(crate) fn reciprocal_rank_kernel(rels: &[i64]) -> f64 {
    rels.iter()
        .position(|&r| r > 0)
        .map_or(0.0, |i| 1.0 / (i + 1) as f64)
}

/// Average precision. `num_rel` is the number of documents judged relevant
/// for the query, retrieved or not; returns 0 when it is 0.
pub fn average_precision(ranking: &OrderedRanking, judgments: &Judgments, num_rel: usize) -> f64 {
    average_precision_kernel(&relevance_by_rank(ranking.doc_ids(), judgments), num_rel)
}

/// NDCG over the whole ranking (`cutoff = None`) or its first `k` ranks.
///
/// The ideal DCG uses every judged-relevant document, truncated at the same
/// cutoff. Returns 0 when nothing is judged relevant.
pub fn ndcg(ranking: &OrderedRanking, judgments: &Judgments, cutoff: Option<usize>) -> f64 {
    let rels = relevance_by_rank(ranking.doc_ids(), judgments);
    ndcg_kernel(&rels, &ideal_gains(judgments), cutoff)
}

/// Fraction of the first `k` ranks holding a relevant document.
pub fn precision_at_k(ranking: &OrderedRanking, judgments: &Judgments, k: usize) -> f64 {
    assert!(k > 0, "precision cutoff must be positive");
    precision_kernel(&relevance_by_rank(ranking.doc_ids(), judgments), k)
}

pub fn reciprocal_rank(ranking: &OrderedRanking, judgments: &Judgments) -> f64 {
    reciprocal_rank_kernel(&relevance_by_rank(ranking.doc_ids(), judgments))
}
