use alloc::vec;
use alloc::vec::Vec;

use super::{check_dim, Agent, Observation};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::simplex::{softmax, PolicyDistribution};
use crate::types::ActionIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// One `θ` scored against per-action features `x_{t,a}`.
    Shared { dim: usize },
    /// No per-action features: `x_{t,a}` is the context placed in block `a`
    /// of a `k·m` vector, so `θ` holds one row per action.
    PerArm { dim: usize },
}

/// Linear scorer `x_{t,a}^T θ` with softmax action probabilities, trained by
/// `θ ← θ + α (r - x^T θ) x - λ θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridLinear {
    theta: Vec<f64>,
    k: usize,
    layout: Layout,
    learning_rate: f64,
    reg: f64,
    sample_actions: bool,
}

impl HybridLinear {
    pub fn shared(k: usize, dim: usize, learning_rate: f64, reg: f64) -> Result<Self> {
        Self::build(k, Layout::Shared { dim }, dim, learning_rate, reg)
    }

    pub fn per_arm(k: usize, dim: usize, learning_rate: f64, reg: f64) -> Result<Self> {
        Self::build(k, Layout::PerArm { dim }, k * dim, learning_rate, reg)
    }

    fn build(k: usize, layout: Layout, len: usize, learning_rate: f64, reg: f64) -> Result<Self> {
        if k == 0 || len == 0 {
            return Err(Error::invalid("hybrid bandit needs k >= 1 and dim >= 1"));
        }
        if !learning_rate.is_finite() || learning_rate < 0.0 {
            return Err(Error::invalid("learning rate must be non-negative"));
        }
        if !reg.is_finite() || reg < 0.0 {
            return Err(Error::invalid("regularization must be non-negative"));
        }
        Ok(Self {
            theta: vec![0.0; len],
            k,
            layout,
            learning_rate,
            reg,
            sample_actions: false,
        })
    }

    /// Sample the action from the softmax instead of taking its argmax.
    pub fn with_sampling(mut self, sample_actions: bool) -> Self {
        self.sample_actions = sample_actions;
        self
    }

    pub fn with_theta(mut self, theta: Vec<f64>) -> Result<Self> {
        check_dim(self.theta.len(), theta.len())?;
        self.theta = theta;
        Ok(self)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    fn check(&self, obs: &Observation<'_>) -> Result<()> {
        match (self.layout, obs.action_features) {
            (Layout::Shared { dim }, Some(_)) => check_dim(dim, obs.arm_dim()),
            (Layout::Shared { .. }, None) => Err(Error::invalid(
                "shared-parameter hybrid bandit needs per-action features",
            )),
            (Layout::PerArm { dim }, _) => check_dim(dim, obs.context.len()),
        }
    }

    /// `(offset into θ, features)` for action `a`.
    fn slot<'a>(&self, obs: &Observation<'a>, a: usize) -> (usize, &'a [f64]) {
        match self.layout {
            Layout::Shared { .. } => (0, obs.arm_features(a)),
            Layout::PerArm { dim } => (a * dim, obs.context),
        }
    }

    fn score(&self, obs: &Observation<'_>, a: usize) -> f64 {
        let (offset, x) = self.slot(obs, a);
        x.iter()
            .zip(&self.theta[offset..])
            .map(|(x, t)| x * t)
            .sum()
    }

    pub fn scores(&self, obs: &Observation<'_>) -> Result<Vec<f64>> {
        self.check(obs)?;
        Ok((0..self.k).map(|a| self.score(obs, a)).collect())
    }
}

impl Agent for HybridLinear {
    fn num_actions(&self) -> usize {
        self.k
    }

    fn act(
        &self,
        obs: &Observation<'_>,
        rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        let p = softmax(&self.scores(obs)?, 1.0)?;
        let action = if self.sample_actions {
            p.sample(rng)
        } else {
            p.argmax()
        };
        Ok((action, p))
    }

    fn update(
        &mut self,
        obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        _rng: &mut RngStream,
    ) -> Result<()> {
        self.check(obs)?;
        let a = action.get();
        let residual = reward - self.score(obs, a);
        let (offset, x) = self.slot(obs, a);
        let step = self.learning_rate * residual;
        // decay uses the pre-update θ
        let mut next: Vec<f64> = self.theta.iter().map(|t| t - self.reg * t).collect();
        for (n, xi) in next[offset..].iter_mut().zip(x) {
            *n += step * xi;
        }
        self.theta = next;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn obs_for<'a>(ctx: &'a [f64], xs: &'a [Vec<f64>]) -> Observation<'a> {
        Observation::with_action_features(ctx, xs)
    }

    #[test]
    fn fresh_agent_is_uniform_and_picks_zero() {
        let agent = HybridLinear::shared(4, 2, 0.1, 0.01).unwrap();
        let xs = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![-1.0, 0.5],
        ];
        let (a, p) = agent
            .act(&obs_for(&[0.0, 0.0], &xs), &mut RngStream::new(0))
            .unwrap();
        assert_eq!(a.get(), 0);
        assert!(p.probs().iter().all(|&q| (q - 0.25).abs() < 1e-15));
    }

    #[test]
    fn gradient_step_from_zero() {
        let mut agent = HybridLinear::shared(1, 3, 0.1, 0.01).unwrap();
        let xs = vec![vec![1.0, 0.0, 0.0]];
        agent
            .update(
                &obs_for(&[0.0; 3], &xs),
                ActionIndex::unchecked(0),
                1.0,
                &mut RngStream::new(0),
            )
            .unwrap();
        assert_abs_diff_eq!(agent.theta()[0], 0.1, epsilon = 1e-15);
        assert_eq!(&agent.theta()[1..], &[0.0, 0.0]);
    }

    #[test]
    fn zero_features_pure_decay() {
        let mut agent = HybridLinear::shared(1, 2, 0.1, 0.01)
            .unwrap()
            .with_theta(vec![1.0, 0.0])
            .unwrap();
        let xs = vec![vec![0.0, 0.0]];
        for r in [5.0, -3.0] {
            let before = agent.theta()[0];
            agent
                .update(
                    &obs_for(&[0.0; 2], &xs),
                    ActionIndex::unchecked(0),
                    r,
                    &mut RngStream::new(0),
                )
                .unwrap();
            assert_abs_diff_eq!(agent.theta()[0], 0.99 * before, epsilon = 1e-15);
        }
    }

    #[test]
    fn general_rule() {
        let theta = vec![0.3, -0.2];
        let x = vec![0.5, 2.0];
        let (alpha, reg, r) = (0.1, 0.01, 0.7);
        let mut agent = HybridLinear::shared(1, 2, alpha, reg)
            .unwrap()
            .with_theta(theta.clone())
            .unwrap();
        let xs = vec![x.clone()];
        agent
            .update(
                &obs_for(&[0.0; 2], &xs),
                ActionIndex::unchecked(0),
                r,
                &mut RngStream::new(0),
            )
            .unwrap();
        let pred = theta[0] * x[0] + theta[1] * x[1];
        for i in 0..2 {
            let expected = theta[i] + alpha * (r - pred) * x[i] - reg * theta[i];
            assert_abs_diff_eq!(agent.theta()[i], expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn per_arm_layout_uses_blocks() {
        let mut agent = HybridLinear::per_arm(3, 2, 0.5, 0.0).unwrap();
        let ctx = [1.0, 2.0];
        let obs = Observation::new(&ctx);
        agent
            .update(&obs, ActionIndex::unchecked(1), 1.0, &mut RngStream::new(0))
            .unwrap();
        assert_eq!(agent.theta(), &[0.0, 0.0, 0.5, 1.0, 0.0, 0.0]);
        let (a, _) = agent.act(&obs, &mut RngStream::new(0)).unwrap();
        assert_eq!(a.get(), 1);
    }

    #[test]
    fn shared_layout_requires_action_features() {
        let agent = HybridLinear::shared(2, 2, 0.1, 0.01).unwrap();
        assert!(agent
            .act(&Observation::new(&[1.0, 1.0]), &mut RngStream::new(0))
            .is_err());
    }
}
