use crate::eval::{ndcg, Judgments};
use crate::synth::{retrieve, Index, QueryCollection};

use super::GymError;

/// Dirichlet prior weight used for retrieval.
pub const DEFAULT_MU: f64 = 2500.0;
/// Ranking depth scored by the reward.
pub const DEFAULT_TOP_K: usize = 10;
/// Actions per episode.
pub const MAX_STEPS: usize = 5;

/// Terms present in the expanded query, sorted and distinct.
///
/// This is the sparse form of a binary vector over the vocabulary; it doubles
/// as the Q-table state key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observation {
    terms: Vec<u32>,
}

impl Observation {
    pub(crate) fn from_terms(terms: &[u32]) -> Self {
        let mut terms = terms.to_vec();
        terms.sort_unstable();
        terms.dedup();
        Self { terms }
    }

    pub fn terms(&self) -> &[u32] {
        &self.terms
    }

    pub fn contains(&self, term: u32) -> bool {
        self.terms.binary_search(&term).is_ok()
    }

    /// Dense binary vector of length `vocab_size`.
    pub fn to_bits(&self, vocab_size: usize) -> Vec<bool> {
        let mut bits = vec![false; vocab_size];
        for &t in &self.terms {
            if let Some(b) = bits.get_mut(t as usize) {
                *b = true;
            }
        }
        bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub reward: f64,
    pub ndcg: f64,
    pub done: bool,
}

#[derive(Debug, Clone)]
struct Episode {
    query: usize,
    observation: Observation,
    retrieval_terms: Vec<u32>,
    steps: usize,
    initial_ndcg: f64,
    last_ndcg: f64,
    done: bool,
}

/// Query-expansion environment: each action appends one vocabulary term to
/// the current query (or does nothing) and is rewarded with the change in
/// NDCG of the top-ranked documents.
#[derive(Debug, Clone)]
pub struct QueryExpansionEnv<'a> {
    index: &'a Index,
    queries: &'a QueryCollection,
    judgments: Vec<Judgments>,
    mu: f64,
    top_k: usize,
    episode: Option<Episode>,
}

impl<'a> QueryExpansionEnv<'a> {
    pub fn new(index: &'a Index, queries: &'a QueryCollection) -> Self {
        let judgments = (0..queries.len())
            .map(|q| {
                queries
                    .relevant(q)
                    .iter()
                    .map(|&d| (index.doc_id(d).to_owned(), 1))
                    .collect()
            })
            .collect();
        Self {
            index,
            queries,
            judgments,
            mu: DEFAULT_MU,
            top_k: DEFAULT_TOP_K,
            episode: None,
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.index.vocab_size()
    }

    /// Action ids are `0..vocab_size` (add that term) plus the null action.
    pub fn num_actions(&self) -> usize {
        self.vocab_size() + 1
    }

    pub fn null_action(&self) -> usize {
        self.vocab_size()
    }

    pub fn num_queries(&self) -> usize {
        self.queries.len()
    }

    fn score(&self, query: usize, terms: &[u32]) -> Result<f64, GymError> {
        let ranking = retrieve(self.index, terms, self.mu, self.top_k)?;
        Ok(ndcg(&ranking, &self.judgments[query], None))
    }

    /// Starts an episode on `query` with only its own terms active. An
    /// episode whose initial ranking is already perfect starts done.
    pub fn reset(&mut self, query: usize) -> Result<Observation, GymError> {
        if query >= self.queries.len() {
            return Err(GymError::UnknownQuery(query));
        }
        let terms = self.queries.terms(query).to_vec();
        let ndcg = self.score(query, &terms)?;
        let observation = Observation::from_terms(&terms);
        self.episode = Some(Episode {
            query,
            observation: observation.clone(),
            retrieval_terms: terms,
            steps: 0,
            initial_ndcg: ndcg,
            last_ndcg: ndcg,
            done: is_perfect(ndcg),
        });
        Ok(observation)
    }

    pub fn step(&mut self, action: usize) -> Result<(Observation, StepOutcome), GymError> {
        let num_actions = self.num_actions();
        let null = self.null_action();
        let Some(mut ep) = self.episode.take() else {
            return Err(GymError::NoEpisode);
        };
        let result = (|| {
            if ep.done {
                return Err(GymError::EpisodeDone);
            }
            if action >= num_actions {
                return Err(GymError::InvalidAction {
                    action,
                    num_actions,
                });
            }
            let term = action as u32;
            let ndcg = if action == null || ep.observation.contains(term) {
                ep.last_ndcg
            } else {
                ep.retrieval_terms.push(term);
                ep.observation = Observation::from_terms(&ep.retrieval_terms);
                self.score(ep.query, &ep.retrieval_terms)?
            };
            let reward = ndcg - ep.last_ndcg;
            ep.last_ndcg = ndcg;
            ep.steps += 1;
            ep.done = ep.steps >= MAX_STEPS || is_perfect(ndcg);
            Ok((
                ep.observation.clone(),
                StepOutcome {
                    reward,
                    ndcg,
                    done: ep.done,
                },
            ))
        })();
        self.episode = Some(ep);
        result
    }

    pub fn is_done(&self) -> bool {
        self.episode.as_ref().is_none_or(|e| e.done)
    }

    pub fn steps(&self) -> usize {
        self.episode.as_ref().map_or(0, |e| e.steps)
    }

    pub fn initial_ndcg(&self) -> Option<f64> {
        self.episode.as_ref().map(|e| e.initial_ndcg)
    }

    pub fn current_ndcg(&self) -> Option<f64> {
        self.episode.as_ref().map(|e| e.last_ndcg)
    }
}

fn is_perfect(ndcg: f64) -> bool {
    ndcg >= 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{build_index, SyntheticCollection};

    fn world() -> (Index, QueryCollection) {
        let docs = vec![vec![0, 1, 2], vec![3, 3, 4], vec![1, 5, 6], vec![2, 7, 7]];
        let c = SyntheticCollection::from_documents(8, docs).unwrap();
        let q = QueryCollection::new(vec![vec![1, 1], vec![3, 7]], vec![vec![0], vec![0, 2]], 4);
        (build_index(&c).unwrap(), q)
    }

    #[test]
    fn reset_sets_query_bits() {
        let (idx, q) = world();
        let mut env = QueryExpansionEnv::new(&idx, &q);
        let obs = env.reset(1).unwrap();
        let bits = obs.to_bits(8);
        assert_eq!(bits.iter().filter(|&&b| b).count(), 2);
        assert!(bits[3] && bits[7]);
        assert_eq!(env.reset(0).unwrap().terms(), &[1]);
        assert_eq!(env.reset(1).unwrap(), obs);
        assert!(matches!(env.reset(2), Err(GymError::UnknownQuery(2))));
    }

    #[test]
    fn null_and_repeated_terms_are_free() {
        let (idx, q) = world();
        let mut env = QueryExpansionEnv::new(&idx, &q);
        let start = env.reset(0).unwrap();
        let (obs, out) = env.step(env.null_action()).unwrap();
        assert_eq!(out.reward, 0.0);
        assert_eq!(obs, start);
        assert_eq!(env.steps(), 1);
        let (obs, out) = env.step(1).unwrap();
        assert_eq!(out.reward, 0.0);
        assert_eq!(obs, start);
    }

    #[test]
    fn episode_ends_after_five_actions_and_stays_done() {
        let (idx, q) = world();
        let mut env = QueryExpansionEnv::new(&idx, &q);
        env.reset(1).unwrap();
        assert!(!env.is_done());
        let mut total = 0.0;
        for _ in 0..MAX_STEPS {
            let (_, out) = env.step(4).unwrap();
            total += out.reward;
        }
        assert!(env.is_done());
        assert_eq!(env.steps(), MAX_STEPS);
        assert!(matches!(env.step(0), Err(GymError::EpisodeDone)));
        let telescoped = env.current_ndcg().unwrap() - env.initial_ndcg().unwrap();
        assert!((total - telescoped).abs() < 1e-12);
    }

    #[test]
    fn perfect_ndcg_terminates() {
        let (idx, q) = world();
        let mut env = QueryExpansionEnv::new(&idx, &q);
        env.reset(0).unwrap();
        assert!(env.initial_ndcg().unwrap() < 1.0);
        let (_, out) = env.step(0).unwrap();
        assert_eq!(out.ndcg, 1.0);
        assert!(out.done);
    }

    #[test]
    fn step_requires_episode_and_valid_action() {
        let (idx, q) = world();
        let mut env = QueryExpansionEnv::new(&idx, &q);
        assert!(matches!(env.step(0), Err(GymError::NoEpisode)));
        env.reset(1).unwrap();
        assert!(matches!(
            env.step(9),
            Err(GymError::InvalidAction { action: 9, .. })
        ));
        assert_eq!(env.steps(), 0);
    }
}
