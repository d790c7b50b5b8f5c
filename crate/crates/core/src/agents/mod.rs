//! Bandit learners.
//!
//! Every agent reports the full policy distribution it acted from, so the
//! entropy gate can be applied uniformly. Deterministic learners (UCB1,
//! LinUCB) report a temperature softmax over their index scores.

mod bootstrapped_ts;
mod epsilon_greedy;
mod hybrid_linear;
mod linucb;
mod softmax_linear;
mod ucb1;

pub use bootstrapped_ts::BootstrappedTs;
pub use epsilon_greedy::EpsilonGreedy;
pub use hybrid_linear::HybridLinear;
pub use linucb::LinUcb;
pub use softmax_linear::SoftmaxLinear;
pub use ucb1::Ucb1;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::simplex::PolicyDistribution;
use crate::types::ActionIndex;

/// What an agent sees in a round.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    /// Single context vector `s_t`.
    pub context: &'a [f64],
    /// Per-action feature vectors `x_{t,a}`, when the environment has them.
    pub action_features: Option<&'a [Vec<f64>]>,
}

impl<'a> Observation<'a> {
    pub fn new(context: &'a [f64]) -> Self {
        Self {
            context,
            action_features: None,
        }
    }

    pub fn with_action_features(context: &'a [f64], action_features: &'a [Vec<f64>]) -> Self {
        Self {
            context,
            action_features: Some(action_features),
        }
    }

    /// Features a per-arm linear model uses for `arm`: `x_{t,a}` when
    /// available, otherwise the shared context.
    pub fn arm_features(&self, arm: usize) -> &'a [f64] {
        match self.action_features {
            Some(xs) => &xs[arm],
            None => self.context,
        }
    }

    /// Dimension of [`Observation::arm_features`].
    pub fn arm_dim(&self) -> usize {
        match self.action_features {
            Some(xs) => xs.first().map_or(0, Vec::len),
            None => self.context.len(),
        }
    }

    fn check_actions(&self, k: usize) -> Result<()> {
        match self.action_features {
            Some(xs) if xs.len() != k => Err(Error::DimensionMismatch {
                expected: k,
                actual: xs.len(),
            }),
            Some(xs) => {
                let d = self.arm_dim();
                match xs.iter().find(|x| x.len() != d) {
                    Some(x) => Err(Error::DimensionMismatch {
                        expected: d,
                        actual: x.len(),
                    }),
                    None => Ok(()),
                }
            }
            None => Ok(()),
        }
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

pub(crate) fn check_action(action: ActionIndex, k: usize) -> Result<()> {
    ActionIndex::new(action.get(), k).map(|_| ())
}

pub trait Agent {
    fn num_actions(&self) -> usize;

    /// Chooses an action and returns the distribution it was drawn from (or,
    /// for greedy learners, the reported distribution).
    fn act(
        &self,
        obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)>;

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        rng: &mut RngStream,
    ) -> Result<()>;
}

/// Hyperparameters of one agent family.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentSpec {
    EpsilonGreedy {
        epsilon: f64,
    },
    Ucb1 {
        c: f64,
        temperature: f64,
    },
    LinUcb {
        alpha: f64,
        temperature: f64,
    },
    BootstrappedTs {
        replicates: usize,
        update_prob: f64,
        prior_scale: f64,
    },
    SoftmaxLinear {
        learning_rate: f64,
        temperature: f64,
    },
    HybridLinear {
        learning_rate: f64,
        reg: f64,
        sample_actions: bool,
    },
}

impl AgentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AgentSpec::EpsilonGreedy { .. } => "epsilon_greedy",
            AgentSpec::Ucb1 { .. } => "ucb1",
            AgentSpec::LinUcb { .. } => "linucb",
            AgentSpec::BootstrappedTs { .. } => "bootstrapped_ts",
            AgentSpec::SoftmaxLinear { .. } => "softmax_linear",
            AgentSpec::HybridLinear { .. } => "hybrid_linear",
        }
    }

    /// Builds a fresh agent for `k` actions. `context_dim` is the size of
    /// `s_t`; `action_dim` the size of `x_{t,a}` when the environment provides
    /// per-action features. `rng` seeds any randomized initialization.
    pub fn build(
        &self,
        k: usize,
        context_dim: usize,
        action_dim: Option<usize>,
        rng: &mut RngStream,
    ) -> Result<AgentState> {
        let arm_dim = action_dim.unwrap_or(context_dim);
        Ok(match *self {
            AgentSpec::EpsilonGreedy { epsilon } => {
                AgentState::EpsilonGreedy(EpsilonGreedy::new(k, epsilon)?)
            }
            AgentSpec::Ucb1 { c, temperature } => AgentState::Ucb1(Ucb1::new(k, c, temperature)?),
            AgentSpec::LinUcb { alpha, temperature } => {
                AgentState::LinUcb(LinUcb::new(k, arm_dim, alpha, temperature)?)
            }
            AgentSpec::BootstrappedTs {
                replicates,
                update_prob,
                prior_scale,
            } => AgentState::BootstrappedTs(BootstrappedTs::new(
                k,
                arm_dim,
                replicates,
                update_prob,
                prior_scale,
                rng,
            )?),
            AgentSpec::SoftmaxLinear {
                learning_rate,
                temperature,
            } => AgentState::SoftmaxLinear(SoftmaxLinear::new(
                k,
                context_dim,
                learning_rate,
                temperature,
            )?),
            AgentSpec::HybridLinear {
                learning_rate,
                reg,
                sample_actions,
            } => {
                let agent = match action_dim {
                    Some(d) => HybridLinear::shared(k, d, learning_rate, reg)?,
                    None => HybridLinear::per_arm(k, context_dim, learning_rate, reg)?,
                };
                AgentState::HybridLinear(agent.with_sampling(sample_actions))
            }
        })
    }
}

/// Any of the supported learners.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentState {
    EpsilonGreedy(EpsilonGreedy),
    Ucb1(Ucb1),
    LinUcb(LinUcb),
    BootstrappedTs(BootstrappedTs),
    SoftmaxLinear(SoftmaxLinear),
    HybridLinear(HybridLinear),
}

macro_rules! dispatch {
    ($self:expr, $a:ident => $body:expr) => {
        match $self {
            AgentState::EpsilonGreedy($a) => $body,
            AgentState::Ucb1($a) => $body,
            AgentState::LinUcb($a) => $body,
            AgentState::BootstrappedTs($a) => $body,
            AgentState::SoftmaxLinear($a) => $body,
            AgentState::HybridLinear($a) => $body,
        }
    };
}

impl Agent for AgentState {
    fn num_actions(&self) -> usize {
        dispatch!(self, a => a.num_actions())
    }

    fn act(
        &self,
        obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        obs.check_actions(self.num_actions())?;
        dispatch!(self, a => a.act(obs, rng))
    }

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        rng: &mut RngStream,
    ) -> Result<()> {
        if !reward.is_finite() {
            return Err(Error::invalid("feedback reward must be finite"));
        }
        check_action(action, self.num_actions())?;
        obs.check_actions(self.num_actions())?;
        dispatch!(self, a => a.update(obs, action, reward, rng))
    }
}
