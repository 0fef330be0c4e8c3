use std::cmp::Ordering;

use super::{DocScores, EvalError};

/// A document at its position in a ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedDoc {
    pub doc_id: String,
    pub score: f64,
    /// 1-based.
    pub rank: usize,
}

/// Documents in evaluation order: score descending, then document id
/// descending (byte-wise). Ranks run 1..=n without gaps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrderedRanking {
    entries: Vec<RankedDoc>,
}

impl OrderedRanking {
    /// Ranks arbitrary `(doc_id, score)` pairs.
    pub fn from_scored(scored: Vec<(String, f64)>) -> Result<Self, EvalError> {
        if let Some((doc, score)) = scored.iter().find(|(_, s)| !s.is_finite()) {
            return Err(EvalError::NonFiniteScore {
                doc: doc.clone(),
                score: *score,
            });
        }
        let mut scored = scored;
        scored.sort_unstable_by(|a, b| compare_entries(&a.0, a.1, &b.0, b.1));
        let entries = scored
            .into_iter()
            .enumerate()
            .map(|(i, (doc_id, score))| RankedDoc {
                doc_id,
                score,
                rank: i + 1,
            })
            .collect();
        Ok(Self { entries })
    }

    /// Keeps the first `depth` entries.
    pub fn truncate(&mut self, depth: usize) {
        self.entries.truncate(depth);
    }

    pub fn entries(&self) -> &[RankedDoc] {
        &self.entries
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Sorts a query's scored documents into evaluation order.
pub fn rank_documents(scored: &DocScores) -> Result<OrderedRanking, EvalError> {
    OrderedRanking::from_scored(scored.iter().map(|(d, s)| (d.clone(), *s)).collect())
}

/// Evaluation order without copying document ids.
pub(crate) fn sorted_refs(scored: &DocScores) -> Result<Vec<(&str, f64)>, EvalError> {
    let mut refs = Vec::with_capacity(scored.len());
    for (doc, &score) in scored {
        if !score.is_finite() {
            return Err(EvalError::NonFiniteScore {
                doc: doc.clone(),
                score,
            });
        }
        refs.push((doc.as_str(), score));
    }
    refs.sort_unstable_by(|a, b| compare_entries(a.0, a.1, b.0, b.1));
    Ok(refs)
}

fn compare_entries(doc_a: &str, score_a: f64, doc_b: &str, score_b: f64) -> Ordering {
    // Scores are finite here; partial_cmp keeps -0.0 == 0.0 like C's `<`.
    score_b
        .partial_cmp(&score_a)
        .unwrap_or(Ordering::Equal)
        .then_with(|| doc_b.as_bytes().cmp(doc_a.as_bytes()))
}
