//! Synthetic linear world: `r = squash(f(x_a^T θ*) + ε)` with an optional
//! `tanh` nonlinearity and a Bernoulli sparsity mask.

use alloc::vec;
use alloc::vec::Vec;

use super::RoundData;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rng::RngStream;
use crate::simplex::argmax_index;
use crate::types::{ActionIndex, Context, RewardKind, RewardVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticEnvParams {
    theta_star: Vec<f64>,
    noise_sigma: f64,
    k: usize,
    nonlinear: bool,
    sparsity_rho: f64,
    seed: u64,
}

impl SyntheticEnvParams {
    pub fn new(
        theta_star: Vec<f64>,
        noise_sigma: f64,
        k: usize,
        nonlinear: bool,
        sparsity_rho: f64,
        seed: u64,
    ) -> Result<Self> {
        if theta_star.is_empty() {
            return Err(Error::invalid("theta_star must have at least one entry"));
        }
        if theta_star.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("theta_star must be finite"));
        }
        if !(noise_sigma >= 0.0) || !noise_sigma.is_finite() {
            return Err(Error::invalid(
                "noise_sigma must be finite and non-negative",
            ));
        }
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(0.0..=1.0).contains(&sparsity_rho) {
            return Err(Error::invalid("sparsity_rho must lie in [0, 1]"));
        }
        Ok(Self {
            theta_star,
            noise_sigma,
            k,
            nonlinear,
            sparsity_rho,
            seed,
        })
    }

    /// Draws `θ* ~ N(0, I_d)` from `seed` and rescales it to unit norm.
    pub fn with_random_theta(
        d: usize,
        k: usize,
        noise_sigma: f64,
        nonlinear: bool,
        sparsity_rho: f64,
        seed: u64,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d must be at least 1"));
        }
        let mut rng = RngStream::new(seed);
        let mut theta: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let norm = libm::sqrt(dot(&theta, &theta));
        if norm > 0.0 {
            theta.iter_mut().for_each(|v| *v /= norm);
        }
        Self::new(theta, noise_sigma, k, nonlinear, sparsity_rho, seed)
    }

    pub fn theta_star(&self) -> &[f64] {
        &self.theta_star
    }

    pub fn d(&self) -> usize {
        self.theta_star.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn nonlinear(&self) -> bool {
        self.nonlinear
    }

    pub fn sparsity_rho(&self) -> f64 {
        self.sparsity_rho
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn mean(&self, x: &[f64]) -> f64 {
        let mu = dot(x, &self.theta_star);
        if self.nonlinear {
            libm::tanh(mu)
        } else {
            mu
        }
    }
}

fn squash(v: f64) -> f64 {
    ((v + 1.0) / 2.0).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRound {
    /// `x_{t,a}` for every action.
    pub action_features: Vec<Vec<f64>>,
    /// Sparsity mask; `false` forces the action's reward to zero.
    pub mask: Vec<bool>,
    pub data: RoundData,
}

/// Generates round `t`. All randomness comes from `rng.block(t)`, so the
/// result depends only on `(params, t, rng)` and not on earlier calls.
pub fn synthetic_round(params: &SyntheticEnvParams, t: u64, rng: &RngStream) -> SyntheticRound {
    let mut rng = rng.block(t);
    let d = params.d();
    let scale = 1.0 / libm::sqrt(d as f64);
    let action_features: Vec<Vec<f64>> = (0..params.k)
        .map(|_| (0..d).map(|_| rng.standard_normal() * scale).collect())
        .collect();

    let mut rewards = Vec::with_capacity(params.k);
    let mut mask = Vec::with_capacity(params.k);
    for x in &action_features {
        let noise = rng.standard_normal() * params.noise_sigma;
        let keep = rng.bernoulli(params.sparsity_rho);
        mask.push(keep);
        rewards.push(if keep {
            squash(params.mean(x) + noise)
        } else {
            0.0
        });
    }

    let mut context = vec![0.0; d];
    for x in &action_features {
        for (c, v) in context.iter_mut().zip(x) {
            *c += v;
        }
    }
    context.iter_mut().for_each(|c| *c /= params.k as f64);

    let best = synthetic_optimal_action(&action_features, &mask, params);
    let data = RoundData {
        context: Context::new(context).expect("features are finite"),
        rewards: RewardVector::new(rewards, RewardKind::Continuous)
            .expect("squash keeps rewards in [0, 1]"),
        correct_actions: vec![best.get()],
    };
    SyntheticRound {
        action_features,
        mask,
        data,
    }
}

/// Rewards with the noise term removed.
pub fn noiseless_rewards(
    action_features: &[Vec<f64>],
    mask: &[bool],
    params: &SyntheticEnvParams,
) -> Vec<f64> {
    action_features
        .iter()
        .zip(mask)
        .map(|(x, &keep)| if keep { squash(params.mean(x)) } else { 0.0 })
        .collect()
}

/// Best action under the noiseless pipeline, lowest index on ties.
pub fn synthetic_optimal_action(
    action_features: &[Vec<f64>],
    mask: &[bool],
    params: &SyntheticEnvParams,
) -> ActionIndex {
    argmax_index(&noiseless_rewards(action_features, mask, params))
}
