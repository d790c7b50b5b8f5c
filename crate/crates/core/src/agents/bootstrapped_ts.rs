use alloc::vec;
use alloc::vec::Vec;

use super::{check_dim, Agent, Observation};
use crate::error::{Error, Result};
use crate::linalg::{dot, RidgeState};
use crate::rng::RngStream;
use crate::simplex::{argmax_index, PolicyDistribution};
use crate::types::ActionIndex;

/// Added to every vote count before normalizing.
const VOTE_SMOOTHING: f64 = 1e-12;

/// Bootstrapped Thompson sampling over an ensemble of per-arm ridge models.
///
/// Each replicate starts from a random prior draw `b_a ~ N(0, prior_scale² I)`
/// and absorbs each observation with probability `update_prob` (Bernoulli
/// bootstrap). Acting picks one replicate uniformly and plays its greedy arm;
/// the reported distribution is the vote share of all replicates' greedy arms.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrappedTs {
    replicates: Vec<Vec<RidgeState>>,
    k: usize,
    dim: usize,
    update_prob: f64,
}

impl BootstrappedTs {
    pub fn new(
        k: usize,
        dim: usize,
        replicates: usize,
        update_prob: f64,
        prior_scale: f64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if k == 0 || dim == 0 || replicates == 0 {
            return Err(Error::invalid(
                "bootstrapped TS needs k, dim and replicates >= 1",
            ));
        }
        if !(0.0..=1.0).contains(&update_prob) {
            return Err(Error::invalid("update_prob must lie in [0, 1]"));
        }
        if !(prior_scale >= 0.0) || !prior_scale.is_finite() {
            return Err(Error::invalid("prior_scale must be non-negative"));
        }
        let replicates = (0..replicates)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let mut state = RidgeState::new(dim, 1.0);
                        for v in state.b_mut() {
                            *v = prior_scale * rng.standard_normal();
                        }
                        state
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            replicates,
            k,
            dim,
            update_prob,
        })
    }

    pub fn num_replicates(&self) -> usize {
        self.replicates.len()
    }

    fn greedy(&self, replicate: &[RidgeState], obs: &Observation<'_>) -> ActionIndex {
        let scores: Vec<f64> = replicate
            .iter()
            .enumerate()
            .map(|(a, state)| dot(&state.theta(), obs.arm_features(a)))
            .collect();
        argmax_index(&scores)
    }

    /// Vote shares of the replicates' greedy actions.
    pub fn votes(&self, obs: &Observation<'_>) -> Result<PolicyDistribution> {
        check_dim(self.dim, obs.arm_dim())?;
        let mut counts = vec![VOTE_SMOOTHING; self.k];
        for rep in &self.replicates {
            counts[self.greedy(rep, obs).get()] += 1.0;
        }
        PolicyDistribution::from_weights(counts)
    }
}

impl Agent for BootstrappedTs {
    fn num_actions(&self) -> usize {
        self.k
    }

    fn act(
        &self,
        obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        let policy = self.votes(obs)?;
        let chosen = rng.below(self.replicates.len());
        Ok((self.greedy(&self.replicates[chosen], obs), policy))
    }

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        rng: &mut RngStream,
    ) -> Result<()> {
        check_dim(self.dim, obs.arm_dim())?;
        let a = action.get();
        let x = obs.arm_features(a);
        for rep in &mut self.replicates {
            if rng.bernoulli(self.update_prob) {
                rep[a].update(x, reward);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reported_distribution_covers_action() {
        let mut init = RngStream::new(1);
        let agent = BootstrappedTs::new(5, 3, 10, 0.5, 1.0, &mut init).unwrap();
        let ctx = [0.3, -0.4, 1.0];
        let obs = Observation::new(&ctx);
        let mut rng = RngStream::new(2);
        for _ in 0..50 {
            let (a, p) = agent.act(&obs, &mut rng).unwrap();
            assert!(p.prob(a) >= 0.1 - 1e-9);
        }
    }

    #[test]
    fn zero_prior_votes_unanimously() {
        let mut init = RngStream::new(1);
        let agent = BootstrappedTs::new(3, 2, 4, 0.5, 0.0, &mut init).unwrap();
        let p = agent.votes(&Observation::new(&[1.0, 0.0])).unwrap();
        assert!(p.probs()[0] > 1.0 - 1e-9);
    }
}
