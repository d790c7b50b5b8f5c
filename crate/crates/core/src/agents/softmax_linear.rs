use alloc::vec;
use alloc::vec::Vec;

use super::{check_dim, Agent, Observation};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rng::RngStream;
use crate::simplex::{softmax, PolicyDistribution};
use crate::types::ActionIndex;

/// Linear-softmax policy `π(·|s) = softmax(W s / temperature)` trained with
/// REINFORCE and no baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxLinear {
    /// Row-major `k × m`.
    weights: Vec<f64>,
    k: usize,
    dim: usize,
    learning_rate: f64,
    temperature: f64,
}

impl SoftmaxLinear {
    pub fn new(k: usize, dim: usize, learning_rate: f64, temperature: f64) -> Result<Self> {
        if k == 0 || dim == 0 {
            return Err(Error::invalid("softmax policy needs k >= 1 and dim >= 1"));
        }
        if !learning_rate.is_finite() || learning_rate < 0.0 {
            return Err(Error::invalid("learning rate must be non-negative"));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::invalid("temperature must be positive"));
        }
        Ok(Self {
            weights: vec![0.0; k * dim],
            k,
            dim,
            learning_rate,
            temperature,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_dim(self.k * self.dim, weights.len())?;
        self.weights = weights;
        Ok(self)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn policy(&self, context: &[f64]) -> Result<PolicyDistribution> {
        check_dim(self.dim, context.len())?;
        let scores: Vec<f64> = self
            .weights
            .chunks_exact(self.dim)
            .map(|row| dot(row, context))
            .collect();
        softmax(&scores, self.temperature)
    }

    /// `∂ log π(a|s) / ∂W = (onehot(a) - π(·|s)) s^T / temperature`, row-major.
    pub fn log_prob_gradient(&self, context: &[f64], action: ActionIndex) -> Result<Vec<f64>> {
        let pi = self.policy(context)?;
        let mut grad = vec![0.0; self.k * self.dim];
        for (b, row) in grad.chunks_exact_mut(self.dim).enumerate() {
            let coeff = (if b == action.get() { 1.0 } else { 0.0 }) - pi.probs()[b];
            for (g, s) in row.iter_mut().zip(context) {
                *g = coeff * s / self.temperature;
            }
        }
        Ok(grad)
    }
}

impl Agent for SoftmaxLinear {
    fn num_actions(&self) -> usize {
        self.k
    }

    fn act(
        &self,
        obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        let pi = self.policy(obs.context)?;
        Ok((pi.sample(rng), pi))
    }

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        _rng: &mut RngStream,
    ) -> Result<()> {
        let grad = self.log_prob_gradient(obs.context, action)?;
        let step = self.learning_rate * reward;
        for (w, g) in self.weights.iter_mut().zip(grad) {
            *w += step * g;
        }
        Ok(())
    }
}
