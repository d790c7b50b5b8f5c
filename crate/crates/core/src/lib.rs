//! Contextual bandits with entropy-gated expert feedback.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithmic piece:
//! probability-simplex utilities, reward environments, bandit agents, the
//! simulated Action-Recommendation (AR) and Reward-Manipulation (RM) experts,
//! the gates deciding when to query them, and regret accounting. File IO,
//! configuration and the CLI live in the companion `cbhf` crate.
//!
//! A single simulated run is driven by [`sim::run_once`]:
//!
//! 1. the environment emits a context and a reward vector,
//! 2. the agent returns an action together with its policy distribution,
//! 3. the policy entropy is fed to the gate,
//! 4. the gate may ask the expert for an action recommendation or a reward
//!    penalty,
//! 5. the agent is updated with the (possibly manipulated) reward.
//!
//! Regret is always computed from the environment's true rewards.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod agents;
pub mod analysis;
pub mod env;
pub mod error;
pub mod feedback;
pub mod linalg;
pub mod rng;
pub mod sim;
pub mod simplex;
pub mod types;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use simplex::{argmax_tiebreak, entropy, sample, softmax, PolicyDistribution};
pub use types::{ActionIndex, Context, RewardKind, RewardVector};
