use super::queries::{doc_id, doc_id_width};
use super::{SynthError, SyntheticCollection};
use crate::eval::OrderedRanking;

/// Stand-in probability mass for terms absent from the whole collection.
pub const SMOOTHING_FLOOR: f64 = 1e-10;

/// Term-frequency index with the collection language model.
#[derive(Debug, Clone)]
pub struct Index {
    postings: Vec<Vec<(u32, u32)>>,
    doc_lengths: Vec<usize>,
    collection_model: Vec<f64>,
    doc_ids: Vec<String>,
}

impl Index {
    pub fn num_documents(&self) -> usize {
        self.doc_lengths.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.collection_model.len()
    }

    pub fn doc_id(&self, doc: usize) -> &str {
        &self.doc_ids[doc]
    }

    pub fn doc_length(&self, doc: usize) -> usize {
        self.doc_lengths[doc]
    }

    pub fn tf(&self, doc: usize, term: u32) -> u32 {
        let list = &self.postings[doc];
        list.binary_search_by_key(&term, |&(t, _)| t)
            .map(|i| list[i].1)
            .unwrap_or(0)
    }

    /// `P(w|D)`; zero for terms outside the vocabulary.
    pub fn collection_probability(&self, term: u32) -> f64 {
        self.collection_model
            .get(term as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// Dirichlet-smoothed `P(w|d)` with prior weight `mu`.
    pub fn smoothed_probability(&self, doc: usize, term: u32, mu: f64) -> f64 {
        let p_c = self.collection_probability(term);
        let denom = self.doc_lengths[doc] as f64 + mu;
        if p_c == 0.0 {
            return SMOOTHING_FLOOR / denom;
        }
        (self.tf(doc, term) as f64 + mu * p_c) / denom
    }

    /// Query log-likelihood of `doc`, one summand per query occurrence.
    pub fn score(&self, doc: usize, terms: &[u32], mu: f64) -> f64 {
        terms
            .iter()
            .map(|&t| self.smoothed_probability(doc, t, mu).ln())
            .sum()
    }
}

pub fn build_index(collection: &SyntheticCollection) -> Result<Index, SynthError> {
    if collection.is_empty() || collection.total_tokens() == 0 {
        return Err(SynthError::EmptyCollection);
    }
    let width = doc_id_width(collection.len());
    let postings = collection
        .documents()
        .iter()
        .map(|doc| {
            let mut sorted = doc.clone();
            sorted.sort_unstable();
            let mut list: Vec<(u32, u32)> = Vec::new();
            for t in sorted {
                match list.last_mut() {
                    Some((last, n)) if *last == t => *n += 1,
                    _ => list.push((t, 1)),
                }
            }
            list
        })
        .collect();
    Ok(Index {
        postings,
        doc_lengths: collection.documents().iter().map(Vec::len).collect(),
        collection_model: collection.collection_model(),
        doc_ids: (0..collection.len()).map(|d| doc_id(d, width)).collect(),
    })
}

/// Top `top_k` documents by Dirichlet query likelihood.
pub fn retrieve(
    index: &Index,
    terms: &[u32],
    mu: f64,
    top_k: usize,
) -> Result<OrderedRanking, SynthError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(SynthError::InvalidArgument(format!(
            "mu must be positive, got {mu}"
        )));
    }
    if top_k == 0 {
        return Err(SynthError::InvalidArgument(
            "top_k must be at least 1".into(),
        ));
    }
    let scores: Vec<f64> = (0..index.num_documents())
        .map(|d| index.score(d, terms, mu))
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // Zero-padded ids order like their indices, so this matches the
    // evaluator's (score desc, doc id desc) rule.
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(b.cmp(&a)));
    order.truncate(top_k);
    let scored = order
        .into_iter()
        .map(|d| (index.doc_ids[d].clone(), scores[d]))
        .collect();
    OrderedRanking::from_scored(scored).map_err(|e| SynthError::InvalidArgument(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::rank_documents;
    use crate::synth::{sample_collection, SynthConfig};

    fn collection(docs: Vec<Vec<u32>>, vocab: usize) -> SyntheticCollection {
        SyntheticCollection::from_documents(vocab, docs).unwrap()
    }

    #[test]
    fn counts_single_document() {
        let idx = build_index(&collection(vec![vec![0, 0, 1]], 2)).unwrap();
        assert_eq!(idx.tf(0, 0), 2);
        assert_eq!(idx.tf(0, 1), 1);
        assert!((idx.collection_probability(0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_collection_rejected() {
        assert!(matches!(
            build_index(&collection(vec![], 3)),
            Err(SynthError::EmptyCollection)
        ));
        assert!(matches!(
            build_index(&collection(vec![vec![]], 3)),
            Err(SynthError::EmptyCollection)
        ));
    }

    #[test]
    fn smoothed_models_are_distributions() {
        let cfg = SynthConfig {
            vocab_size: 200,
            collection_size: 20,
            mean_doc_length: 50.0,
            ..SynthConfig::default()
        };
        let idx = build_index(&sample_collection(&cfg).unwrap()).unwrap();
        let total: f64 = (0..200).map(|t| idx.collection_probability(t)).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for d in 0..idx.num_documents() {
            let s: f64 = (0..200u32)
                .filter(|&t| idx.collection_probability(t) > 0.0)
                .map(|t| idx.smoothed_probability(d, t, 2500.0))
                .sum();
            assert!((s - 1.0).abs() < 1e-9, "doc {d}: {s}");
        }
    }

    #[test]
    fn huge_mu_flattens_scores() {
        let idx = build_index(&collection(
            vec![vec![0, 0, 1], vec![1, 2, 2, 2], vec![0]],
            3,
        ))
        .unwrap();
        let scores: Vec<f64> = (0..3).map(|d| idx.score(d, &[0, 2], 1e9)).collect();
        let spread = scores.iter().cloned().fold(f64::MIN, f64::max)
            - scores.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-6, "{spread}");
    }

    #[test]
    fn higher_tf_ranks_first() {
        let idx = build_index(&collection(vec![vec![0, 1, 1, 1], vec![0, 0, 1, 1]], 2)).unwrap();
        let r = retrieve(&idx, &[0], 2500.0, 10).unwrap();
        assert_eq!(r.doc_ids().collect::<Vec<_>>(), ["d1", "d0"]);
    }

    #[test]
    fn top_k_truncates_and_caps_at_collection_size() {
        let idx = build_index(&collection(vec![vec![0], vec![1], vec![0, 1]], 2)).unwrap();
        assert_eq!(retrieve(&idx, &[0], 2500.0, 10).unwrap().len(), 3);
        assert_eq!(retrieve(&idx, &[0], 2500.0, 1).unwrap().len(), 1);
        assert!(retrieve(&idx, &[0], 2500.0, 0).is_err());
        assert!(retrieve(&idx, &[0], 0.0, 1).is_err());
    }

    #[test]
    fn unseen_terms_use_floor() {
        let idx = build_index(&collection(vec![vec![0], vec![0, 0]], 5)).unwrap();
        let p = idx.smoothed_probability(0, 4, 2500.0);
        assert_eq!(p, SMOOTHING_FLOOR / 2501.0);
        assert!(idx.score(0, &[4, 99], 2500.0).is_finite());
    }

    #[test]
    fn tie_order_matches_evaluator() {
        let docs = (0..12).map(|_| vec![0]).collect();
        let idx = build_index(&collection(docs, 1)).unwrap();
        let r = retrieve(&idx, &[0], 2500.0, 12).unwrap();
        let scores = r
            .entries()
            .iter()
            .map(|e| (e.doc_id.clone(), e.score))
            .collect();
        let expected = rank_documents(&scores).unwrap();
        assert!(r.doc_ids().eq(expected.doc_ids()));
        assert_eq!(r.doc_ids().next(), Some("d11"));
    }
}
