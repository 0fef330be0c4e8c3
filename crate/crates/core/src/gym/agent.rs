use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use super::{GymError, Observation};

/// Q-learning hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub episodes: usize,
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            gamma: 0.95,
            epsilon: 0.05,
            episodes: 20_000,
            seed: 1,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<(), GymError> {
        let check = |ok: bool, what: &str, v: f64| {
            if ok {
                Ok(())
            } else {
                Err(GymError::InvalidConfig(format!("{what} out of range: {v}")))
            }
        };
        check(self.alpha > 0.0 && self.alpha <= 1.0, "alpha", self.alpha)?;
        check((0.0..=1.0).contains(&self.gamma), "gamma", self.gamma)?;
        check((0.0..=1.0).contains(&self.epsilon), "epsilon", self.epsilon)
    }
}

/// Sparse action-value table. Entries never written read as zero.
#[derive(Debug, Clone, Default)]
pub struct QTable {
    num_actions: usize,
    rows: HashMap<Observation, BTreeMap<usize, f64>>,
}

impl QTable {
    pub fn new(num_actions: usize) -> Self {
        assert!(num_actions > 0, "at least one action is required");
        Self {
            num_actions,
            rows: HashMap::new(),
        }
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, state: &Observation, action: usize) -> f64 {
        self.rows
            .get(state)
            .and_then(|row| row.get(&action))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn set(&mut self, state: &Observation, action: usize, value: f64) {
        assert!(action < self.num_actions, "action {action} out of range");
        if let Some(row) = self.rows.get_mut(state) {
            row.insert(action, value);
        } else {
            self.rows
                .insert(state.clone(), BTreeMap::from([(action, value)]));
        }
    }

    /// Highest-valued action and its value; ties go to the lowest index.
    pub fn best(&self, state: &Observation) -> (usize, f64) {
        let Some(row) = self.rows.get(state) else {
            return (0, 0.0);
        };
        let mut best = None::<(usize, f64)>;
        for (&a, &v) in row {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((a, v));
            }
        }
        let (stored_action, stored_value) = best.expect("rows are never empty");
        if row.len() == self.num_actions || stored_value > 0.0 {
            return (stored_action, stored_value);
        }
        // Some action is unvisited and worth 0 >= every stored value.
        let unvisited = (0..)
            .find(|a| !row.contains_key(a))
            .expect("row is not full");
        if stored_value == 0.0 && stored_action < unvisited {
            (stored_action, 0.0)
        } else {
            (unvisited, 0.0)
        }
    }

    pub fn max_value(&self, state: &Observation) -> f64 {
        self.best(state).1
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.values().flat_map(|row| row.values().copied())
    }
}

/// Epsilon-greedy choice: a uniform action with probability `epsilon`,
/// otherwise the greedy one.
pub fn select_action<R: Rng + ?Sized>(
    table: &QTable,
    state: &Observation,
    epsilon: f64,
    rng: &mut R,
) -> usize {
    if rng.random::<f64>() < epsilon {
        rng.random_range(0..table.num_actions())
    } else {
        table.best(state).0
    }
}

/// One-step Q-learning update; the bootstrap term is dropped on terminal steps.
pub fn q_update(
    table: &mut QTable,
    config: &AgentConfig,
    state: &Observation,
    action: usize,
    reward: f64,
    next_state: &Observation,
    done: bool,
) {
    let current = table.get(state, action);
    let bootstrap = if done {
        0.0
    } else {
        config.gamma * table.max_value(next_state)
    };
    let updated = current + config.alpha * (reward + bootstrap - current);
    if updated != 0.0 || current != 0.0 {
        table.set(state, action, updated);
    }
}
