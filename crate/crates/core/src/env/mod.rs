//! Reward-generating environments.

mod multilabel;
mod synthetic;

pub use multilabel::{
    dataset_round, shuffle_order, toy_dataset, Instance, MultiLabelDataset, ToyDatasetParams,
};
pub use synthetic::{
    noiseless_rewards, synthetic_optimal_action, synthetic_round, SyntheticEnvParams,
    SyntheticRound,
};

use alloc::vec::Vec;

use crate::types::{Context, RewardVector};

/// One round emitted by an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundData {
    pub context: Context,
    pub rewards: RewardVector,
    /// Actions a perfect expert would recommend. For multi-label data this is
    /// the label set `y_t`; for the synthetic world it is the noiseless
    /// optimum.
    pub correct_actions: Vec<usize>,
}

impl RoundData {
    /// Reward of the best action this round, recomputed from `rewards`.
    pub fn optimal_value(&self) -> f64 {
        self.rewards.max()
    }
}
