//! Query-expansion environment and a tabular Q-learning agent.
//!
//! An episode starts from a synthetic query. Each action appends one
//! vocabulary term (or does nothing); the reward is the resulting change in
//! NDCG of the top-10 query-likelihood ranking.

mod agent;
mod env;
mod train;

pub use agent::{q_update, select_action, AgentConfig, QTable};
pub use env::{Observation, QueryExpansionEnv, StepOutcome, DEFAULT_MU, DEFAULT_TOP_K, MAX_STEPS};
pub use train::{
    random_baseline, synthesize_world, train, train_many, EpisodeRecord, RewardCurve,
    RUNNING_MEAN_WINDOW,
};

use thiserror::Error;

use crate::synth::SynthError;

#[derive(Debug, Error)]
pub enum GymError {
    #[error("query {0} does not exist")]
    UnknownQuery(usize),
    #[error("no episode in progress; call reset first")]
    NoEpisode,
    #[error("episode is done; call reset to start another")]
    EpisodeDone,
    #[error("action {action} out of range 0..{num_actions}")]
    InvalidAction { action: usize, num_actions: usize },
    #[error("invalid agent configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Synth(#[from] SynthError),
}
