use indexmap::map::Entry;
use indexmap::IndexMap;

use super::EvalError;

/// Judged relevance per document id. Levels `<= 0` are judged non-relevant.
pub type Judgments = IndexMap<String, i64>;

/// Retrieval score per document id.
pub type DocScores = IndexMap<String, f64>;

/// Relevance judgments for a set of queries.
///
/// Insertion order is kept so files written from a `QrelSet` list records in
/// the order they were added.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QrelSet {
    queries: IndexMap<String, Judgments>,
}

impl QrelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a qrel from nested `(query, [(doc, relevance)])` pairs.
    pub fn from_queries<Q, D, I, J>(queries: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (Q, J)>,
        J: IntoIterator<Item = (D, i64)>,
        Q: Into<String>,
        D: Into<String>,
    {
        let mut qrel = Self::new();
        for (query, docs) in queries {
            let query = query.into();
            qrel.queries.entry(query.clone()).or_default();
            for (doc, rel) in docs {
                qrel.insert(query.clone(), doc, rel)?;
            }
        }
        Ok(qrel)
    }

    pub fn insert(
        &mut self,
        query: impl Into<String>,
        doc: impl Into<String>,
        relevance: i64,
    ) -> Result<(), EvalError> {
        let query = query.into();
        let judgments = self.queries.entry(query.clone()).or_default();
        match judgments.entry(doc.into()) {
            Entry::Occupied(e) => Err(EvalError::DuplicateDocument {
                query,
                doc: e.key().clone(),
            }),
            Entry::Vacant(e) => {
                e.insert(relevance);
                Ok(())
            }
        }
    }

    pub fn get(&self, query: &str) -> Option<&Judgments> {
        self.queries.get(query)
    }

    pub(crate) fn get_full(&self, query: &str) -> Option<(usize, &Judgments)> {
        self.queries.get_full(query).map(|(i, _, j)| (i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Judgments)> {
        self.queries.iter().map(|(q, j)| (q.as_str(), j))
    }

    /// Number of queries.
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Total number of (query, document) judgments.
    pub fn num_judgments(&self) -> usize {
        self.queries.values().map(IndexMap::len).sum()
    }
}

/// Scored documents for a set of queries, as produced by a retrieval system.
///
/// Order within a query carries no meaning for evaluation; it is kept only
/// so serialization is faithful to insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSet {
    queries: IndexMap<String, DocScores>,
}

impl RunSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_queries<Q, D, I, J>(queries: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (Q, J)>,
        J: IntoIterator<Item = (D, f64)>,
        Q: Into<String>,
        D: Into<String>,
    {
        let mut run = Self::new();
        for (query, docs) in queries {
            let query = query.into();
            run.queries.entry(query.clone()).or_default();
            for (doc, score) in docs {
                run.insert(query.clone(), doc, score)?;
            }
        }
        Ok(run)
    }

    /// Adds a scored document. Scores must be finite and each document may
    /// appear once per query.
    pub fn insert(
        &mut self,
        query: impl Into<String>,
        doc: impl Into<String>,
        score: f64,
    ) -> Result<(), EvalError> {
        let doc = doc.into();
        if !score.is_finite() {
            return Err(EvalError::NonFiniteScore { doc, score });
        }
        let query = query.into();
        let scores = self.queries.entry(query.clone()).or_default();
        match scores.entry(doc) {
            Entry::Occupied(e) => Err(EvalError::DuplicateDocument {
                query,
                doc: e.key().clone(),
            }),
            Entry::Vacant(e) => {
                e.insert(score);
                Ok(())
            }
        }
    }

    pub fn get(&self, query: &str) -> Option<&DocScores> {
        self.queries.get(query)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &DocScores)> {
        self.queries.iter().map(|(q, s)| (q.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Total number of scored (query, document) pairs.
    pub fn num_scored(&self) -> usize {
        self.queries.values().map(IndexMap::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qrel_rejects_duplicate_pairs() {
        let mut qrel = QrelSet::new();
        qrel.insert("q1", "d1", 1).unwrap();
        qrel.insert("q2", "d1", 1).unwrap();
        assert_eq!(
            qrel.insert("q1", "d1", 0),
            Err(EvalError::DuplicateDocument {
                query: "q1".into(),
                doc: "d1".into()
            })
        );
        assert_eq!(qrel.num_judgments(), 2);
    }

    #[test]
    fn run_rejects_non_finite_scores() {
        let mut run = RunSet::new();
        assert!(matches!(
            run.insert("q1", "d1", f64::NAN),
            Err(EvalError::NonFiniteScore { .. })
        ));
        assert!(run.insert("q1", "d1", f64::INFINITY).is_err());
        assert!(run.is_empty());
    }

    #[test]
    fn negative_relevance_is_stored_verbatim() {
        let qrel = QrelSet::from_queries([("q", vec![("d", -1)])]).unwrap();
        assert_eq!(qrel.get("q").unwrap()["d"], -1);
    }

    #[test]
    fn equality_ignores_insertion_order() {
        let a = RunSet::from_queries([("q", vec![("a", 1.0), ("b", 2.0)])]).unwrap();
        let b = RunSet::from_queries([("q", vec![("b", 2.0), ("a", 1.0)])]).unwrap();
        assert_eq!(a, b);
    }
}
