use std::collections::VecDeque;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    q_update, select_action, AgentConfig, GymError, Observation, QTable, QueryExpansionEnv,
};
use crate::synth::{
    build_index, sample_collection, sample_queries, Index, QueryCollection, SynthConfig,
};
use crate::Execution;

/// Window of the running mean reported next to each episode.
pub const RUNNING_MEAN_WINDOW: usize = 100;

const AGENT_STREAM: u64 = 1 << 60;
const RANDOM_POLICY_STREAM: u64 = 2 << 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub query: usize,
    pub steps: usize,
    pub total_reward: f64,
    pub initial_ndcg: f64,
    pub final_ndcg: f64,
}

impl EpisodeRecord {
    /// Mean reward per action, 0 for episodes that started done.
    pub fn mean_step_reward(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.total_reward / self.steps as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RewardCurve {
    pub records: Vec<EpisodeRecord>,
}

impl RewardCurve {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Trailing mean of total episode reward over at most `window` episodes.
    pub fn running_mean(&self, window: usize) -> Vec<f64> {
        let mut buf = VecDeque::with_capacity(window);
        let mut sum = 0.0;
        self.records
            .iter()
            .map(|r| {
                if buf.len() == window {
                    sum -= buf.pop_front().unwrap_or(0.0);
                }
                buf.push_back(r.total_reward);
                sum += r.total_reward;
                sum / buf.len() as f64
            })
            .collect()
    }

    /// Mean total reward over `records[range]`; NaN when the range is empty.
    pub fn mean_reward(&self, range: std::ops::Range<usize>) -> f64 {
        let slice = &self.records[range];
        slice.iter().map(|r| r.total_reward).sum::<f64>() / slice.len() as f64
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "episode\tquery\tsteps\ttotal_reward\tmean_step_reward\trunning_mean_{RUNNING_MEAN_WINDOW}")?;
        for (r, mean) in self
            .records
            .iter()
            .zip(self.running_mean(RUNNING_MEAN_WINDOW))
        {
            writeln!(
                out,
                "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                r.episode,
                r.query,
                r.steps,
                r.total_reward,
                r.mean_step_reward(),
                mean
            )?;
        }
        out.flush()
    }
}

/// Samples a collection and its queries, then indexes the collection.
pub fn synthesize_world(config: &SynthConfig) -> Result<(Index, QueryCollection), GymError> {
    let collection = sample_collection(config)?;
    let queries = sample_queries(&collection, config)?;
    Ok((build_index(&collection)?, queries))
}

trait Policy {
    fn choose(&mut self, state: &Observation) -> usize;
    fn learn(
        &mut self,
        _state: &Observation,
        _action: usize,
        _reward: f64,
        _next: &Observation,
        _done: bool,
    ) {
    }
}

struct QLearner<'a> {
    table: QTable,
    config: &'a AgentConfig,
    rng: ChaCha8Rng,
}

impl Policy for QLearner<'_> {
    fn choose(&mut self, state: &Observation) -> usize {
        select_action(&self.table, state, self.config.epsilon, &mut self.rng)
    }

    fn learn(
        &mut self,
        state: &Observation,
        action: usize,
        reward: f64,
        next: &Observation,
        done: bool,
    ) {
        q_update(
            &mut self.table,
            self.config,
            state,
            action,
            reward,
            next,
            done,
        );
    }
}

struct UniformPolicy {
    num_actions: usize,
    rng: ChaCha8Rng,
}

impl Policy for UniformPolicy {
    fn choose(&mut self, _state: &Observation) -> usize {
        self.rng.random_range(0..self.num_actions)
    }
}

fn run_episode(
    env: &mut QueryExpansionEnv<'_>,
    episode: usize,
    query: usize,
    policy: &mut impl Policy,
) -> Result<EpisodeRecord, GymError> {
    let mut state = env.reset(query)?;
    let mut total_reward = 0.0;
    while !env.is_done() {
        let action = policy.choose(&state);
        let (next, outcome) = env.step(action)?;
        policy.learn(&state, action, outcome.reward, &next, outcome.done);
        total_reward += outcome.reward;
        state = next;
    }
    Ok(EpisodeRecord {
        episode,
        query,
        steps: env.steps(),
        total_reward,
        initial_ndcg: env.initial_ndcg().unwrap_or(0.0),
        final_ndcg: env.current_ndcg().unwrap_or(0.0),
    })
}

fn run_schedule(
    index: &Index,
    queries: &QueryCollection,
    episodes: usize,
    policy: &mut impl Policy,
) -> Result<RewardCurve, GymError> {
    if queries.is_empty() && episodes > 0 {
        return Err(GymError::InvalidConfig("no training queries".into()));
    }
    let mut env = QueryExpansionEnv::new(index, queries);
    let records = (0..episodes)
        .map(|episode| run_episode(&mut env, episode, episode % queries.len(), policy))
        .collect::<Result<_, _>>()?;
    Ok(RewardCurve { records })
}

fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Tabular Q-learning over `config.episodes` episodes, visiting queries
/// round-robin.
pub fn train(
    index: &Index,
    queries: &QueryCollection,
    config: &AgentConfig,
) -> Result<(RewardCurve, QTable), GymError> {
    config.validate()?;
    let mut learner = QLearner {
        table: QTable::new(index.vocab_size() + 1),
        config,
        rng: seeded(config.seed, AGENT_STREAM),
    };
    let curve = run_schedule(index, queries, config.episodes, &mut learner)?;
    Ok((curve, learner.table))
}

/// Same schedule as [`train`] with actions drawn uniformly at random.
pub fn random_baseline(
    index: &Index,
    queries: &QueryCollection,
    episodes: usize,
    seed: u64,
) -> Result<RewardCurve, GymError> {
    let mut policy = UniformPolicy {
        num_actions: index.vocab_size() + 1,
        rng: seeded(seed, RANDOM_POLICY_STREAM),
    };
    run_schedule(index, queries, episodes, &mut policy)
}

/// Independent training runs, one per config, in parallel when enabled.
pub fn train_many(
    index: &Index,
    queries: &QueryCollection,
    configs: &[AgentConfig],
    exec: Execution,
) -> Vec<Result<(RewardCurve, QTable), GymError>> {
    exec.map(configs, |c| train(index, queries, c))
}
