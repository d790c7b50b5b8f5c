use alloc::vec;
use alloc::vec::Vec;

use super::{Agent, Observation};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::simplex::{argmax_index, PolicyDistribution};
use crate::types::ActionIndex;

/// Context-free ε-greedy over sample-mean value estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGreedy {
    values: Vec<f64>,
    counts: Vec<u64>,
    epsilon: f64,
}

impl EpsilonGreedy {
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::invalid("epsilon must lie in [0, 1]"));
        }
        Ok(Self {
            values: vec![0.0; k],
            counts: vec![0; k],
            epsilon,
        })
    }

    /// Starts from explicit value estimates (counts stay zero).
    pub fn with_values(values: Vec<f64>, epsilon: f64) -> Result<Self> {
        let mut agent = Self::new(values.len(), epsilon)?;
        agent.values = values;
        Ok(agent)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `ε/k + (1-ε)·onehot(greedy)`.
    pub fn policy(&self) -> PolicyDistribution {
        let k = self.values.len();
        let greedy = argmax_index(&self.values).get();
        let mut probs = vec![self.epsilon / k as f64; k];
        probs[greedy] += 1.0 - self.epsilon;
        PolicyDistribution::new(probs).expect("mixture is a distribution")
    }
}

impl Agent for EpsilonGreedy {
    fn num_actions(&self) -> usize {
        self.values.len()
    }

    fn act(
        &self,
        _obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        let action = if rng.bernoulli(self.epsilon) {
            ActionIndex::unchecked(rng.below(self.values.len()))
        } else {
            argmax_index(&self.values)
        };
        Ok((action, self.policy()))
    }

    fn update(
        &mut self,
        _obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        _rng: &mut RngStream,
    ) -> Result<()> {
        let a = action.get();
        self.counts[a] += 1;
        self.values[a] += (reward - self.values[a]) / self.counts[a] as f64;
        Ok(())
    }
}
