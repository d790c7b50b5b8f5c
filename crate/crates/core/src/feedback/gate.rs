use crate::error::{Error, Result};

use super::FeedbackKind;

/// When to ask the expert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GatePolicy {
    /// Fire when the policy entropy exceeds `lambda`.
    FixedEntropy {
        lambda: f64,
    },
    /// Fire on rounds `t` with `t % every == 0`.
    Periodic {
        every: u64,
    },
    /// Threshold grows linearly from `tau_init` at round 0 to `tau_max` at
    /// round `horizon`.
    HybridDynamic {
        tau_init: f64,
        tau_max: f64,
        horizon: u64,
    },
    Always,
    Never,
}

/// Which feedback a firing gate requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackMode {
    /// Fire → the given kind, otherwise nothing.
    Single(FeedbackKind),
    /// Fire → AR, otherwise RM; every round gets feedback. `Always` and
    /// `Never` keep their literal meaning.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateDecision {
    NoFeedback,
    Request(FeedbackKind),
}

impl GatePolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GatePolicy::FixedEntropy { lambda } if !(lambda >= 0.0) => {
                Err(Error::invalid("gate lambda must be non-negative"))
            }
            GatePolicy::Periodic { every: 0 } => Err(Error::invalid("period must be >= 1")),
            GatePolicy::HybridDynamic {
                tau_init,
                tau_max,
                horizon,
            } => {
                if !tau_init.is_finite() || !tau_max.is_finite() || tau_init > tau_max {
                    Err(Error::invalid("need finite tau_init <= tau_max"))
                } else if horizon == 0 {
                    Err(Error::invalid("schedule horizon must be >= 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Entropy threshold in force at round `t`, for entropy-based gates.
    pub fn threshold(&self, t: u64) -> Option<f64> {
        match *self {
            GatePolicy::FixedEntropy { lambda } => Some(lambda),
            GatePolicy::HybridDynamic {
                tau_init,
                tau_max,
                horizon,
            } => Some(tau_init + (t as f64 / horizon as f64) * (tau_max - tau_init)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GatePolicy::FixedEntropy { .. } => "fixed_entropy",
            GatePolicy::Periodic { .. } => "periodic",
            GatePolicy::HybridDynamic { .. } => "hybrid_dynamic",
            GatePolicy::Always => "always",
            GatePolicy::Never => "never",
        }
    }

    fn fires(&self, entropy: f64, t: u64) -> bool {
        match *self {
            GatePolicy::Periodic { every } => t % every == 0,
            GatePolicy::Always => true,
            GatePolicy::Never => false,
            _ => entropy > self.threshold(t).expect("entropy gate"),
        }
    }
}

pub fn gate_decide(policy: &GatePolicy, entropy: f64, t: u64, mode: FeedbackMode) -> GateDecision {
    match (policy, mode) {
        (GatePolicy::Never, _) => GateDecision::NoFeedback,
        (GatePolicy::Always, FeedbackMode::Hybrid) => GateDecision::Request(FeedbackKind::Ar),
        (_, FeedbackMode::Single(kind)) => {
            if policy.fires(entropy, t) {
                GateDecision::Request(kind)
            } else {
                GateDecision::NoFeedback
            }
        }
        (_, FeedbackMode::Hybrid) => GateDecision::Request(if policy.fires(entropy, t) {
            FeedbackKind::Ar
        } else {
            FeedbackKind::Rm
        }),
    }
}
