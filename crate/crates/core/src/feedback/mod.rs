//! Simulated experts, the gates deciding when to consult them, and the cost
//! of doing so.

mod cost;
mod expert;
mod gate;

pub use cost::{total_cost, CostModel};
pub use expert::{apply_ar, expert_ar, expert_rm, ExpertConfig, RecommendMode};
pub use gate::{gate_decide, FeedbackMode, GateDecision, GatePolicy};

use alloc::vec::Vec;

/// Kind of expert interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeedbackKind {
    /// Action recommendation: the expert picks the action.
    Ar,
    /// Reward manipulation: the expert may add a penalty to the reward.
    Rm,
}

impl FeedbackKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackKind::Ar => "AR",
            FeedbackKind::Rm => "RM",
        }
    }
}

/// Record of one round's expert interaction (`kind == None` when no expert
/// was consulted).
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackEvent {
    pub round: u64,
    pub kind: Option<FeedbackKind>,
    pub recommended_set: Vec<usize>,
    pub expert_correct: bool,
    /// True reward of the agent's own action.
    pub reward_before: f64,
    /// Reward passed to the agent's update.
    pub reward_after: f64,
}

impl FeedbackEvent {
    pub fn none(round: u64, reward: f64) -> Self {
        Self {
            round,
            kind: None,
            recommended_set: Vec::new(),
            expert_correct: false,
            reward_before: reward,
            reward_after: reward,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        self.kind.map_or("none", FeedbackKind::as_str)
    }
}
