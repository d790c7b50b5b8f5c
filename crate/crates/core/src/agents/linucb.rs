use alloc::vec::Vec;

use super::{check_dim, Agent, Observation};
use crate::error::{Error, Result};
use crate::linalg::{dot, RidgeState};
use crate::rng::RngStream;
use crate::simplex::{argmax_index, softmax, PolicyDistribution};
use crate::types::ActionIndex;

/// Disjoint LinUCB: one ridge model per arm, `A_a = I + Σ x x^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinUcb {
    arms: Vec<RidgeState>,
    dim: usize,
    alpha: f64,
    temperature: f64,
}

impl LinUcb {
    pub fn new(k: usize, dim: usize, alpha: f64, temperature: f64) -> Result<Self> {
        if k == 0 || dim == 0 {
            return Err(Error::invalid("LinUCB needs k >= 1 and dim >= 1"));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::invalid("alpha must be non-negative"));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::invalid("temperature must be positive"));
        }
        Ok(Self {
            arms: (0..k).map(|_| RidgeState::new(dim, 1.0)).collect(),
            dim,
            alpha,
            temperature,
        })
    }

    pub fn arm(&self, arm: usize) -> &RidgeState {
        &self.arms[arm]
    }

    /// `θ_a = A_a^{-1} b_a` from the maintained inverse.
    pub fn theta(&self, arm: usize) -> Vec<f64> {
        self.arms[arm].theta()
    }

    pub fn scores(&self, obs: &Observation<'_>) -> Result<Vec<f64>> {
        check_dim(self.dim, obs.arm_dim())?;
        Ok(self
            .arms
            .iter()
            .enumerate()
            .map(|(a, state)| {
                let x = obs.arm_features(a);
                dot(&state.theta(), x) + self.alpha * libm::sqrt(state.variance(x))
            })
            .collect())
    }
}

impl Agent for LinUcb {
    fn num_actions(&self) -> usize {
        self.arms.len()
    }

    fn act(
        &self,
        obs: &Observation<'_>,
        _rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        let scores = self.scores(obs)?;
        Ok((argmax_index(&scores), softmax(&scores, self.temperature)?))
    }

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        _rng: &mut RngStream,
    ) -> Result<()> {
        check_dim(self.dim, obs.arm_dim())?;
        let a = action.get();
        self.arms[a].update(obs.arm_features(a), reward);
        Ok(())
    }
}
