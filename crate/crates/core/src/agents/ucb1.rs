use alloc::vec;
use alloc::vec::Vec;

use super::{Agent, Observation};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::simplex::{argmax_index, softmax, PolicyDistribution};
use crate::types::ActionIndex;

/// UCB1 with index `mean_a + c·sqrt(2 ln t / n_a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1 {
    means: Vec<f64>,
    counts: Vec<u64>,
    c: f64,
    temperature: f64,
}

impl Ucb1 {
    pub fn new(k: usize, c: f64, temperature: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::invalid(
                "exploration coefficient must be non-negative",
            ));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::invalid("temperature must be positive"));
        }
        Ok(Self {
            means: vec![0.0; k],
            counts: vec![0; k],
            c,
            temperature,
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Index scores; `None` while some arm is untried.
    pub fn scores(&self) -> Option<Vec<f64>> {
        if self.counts.contains(&0) {
            return None;
        }
        let total: u64 = self.counts.iter().sum();
        let log_t = libm::log(total as f64);
        Some(
            self.means
                .iter()
                .zip(&self.counts)
                .map(|(m, &n)| m + self.c * libm::sqrt(2.0 * log_t / n as f64))
                .collect(),
        )
    }
}

impl Agent for Ucb1 {
    fn num_actions(&self) -> usize {
        self.means.len()
    }

    fn act(
        &self,
        _obs: &Observation<'_>,
        _rng: &mut RngStream,
    ) -> Result<(ActionIndex, PolicyDistribution)> {
        match self.scores() {
            Some(scores) => Ok((argmax_index(&scores), softmax(&scores, self.temperature)?)),
            None => {
                // untried arms have an infinite index: report uniform over them
                let untried: Vec<f64> = self
                    .counts
                    .iter()
                    .map(|&n| if n == 0 { 1.0 } else { 0.0 })
                    .collect();
                let first = self.counts.iter().position(|&n| n == 0).unwrap_or(0);
                Ok((
                    ActionIndex::unchecked(first),
                    PolicyDistribution::from_weights(untried)?,
                ))
            }
        }
    }

    fn update(
        &mut self,
        _obs: &Observation<'_>,
        action: ActionIndex,
        reward: f64,
        _rng: &mut RngStream,
    ) -> Result<()> {
        let a = action.get();
        self.counts[a] += 1;
        self.means[a] += (reward - self.means[a]) / self.counts[a] as f64;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plays_untried_arms_in_order() {
        let mut agent = Ucb1::new(3, 1.0, 1.0).unwrap();
        let mut rng = RngStream::new(0);
        let obs = Observation::new(&[]);
        for expected in 0..3 {
            let (a, p) = agent.act(&obs, &mut rng).unwrap();
            assert_eq!(a.get(), expected);
            assert!(p.prob(a) > 0.0);
            agent.update(&obs, a, 0.5, &mut rng).unwrap();
        }
        assert!(agent.scores().is_some());
    }

    #[test]
    fn index_formula() {
        let mut agent = Ucb1::new(2, 1.0, 1.0).unwrap();
        let mut rng = RngStream::new(0);
        let obs = Observation::new(&[]);
        agent
            .update(&obs, ActionIndex::unchecked(0), 1.0, &mut rng)
            .unwrap();
        agent
            .update(&obs, ActionIndex::unchecked(1), 0.0, &mut rng)
            .unwrap();
        agent
            .update(&obs, ActionIndex::unchecked(1), 0.0, &mut rng)
            .unwrap();
        let s = agent.scores().unwrap();
        let ln3 = 3f64.ln();
        assert!((s[0] - (1.0 + (2.0 * ln3).sqrt())).abs() < 1e-12);
        assert!((s[1] - (ln3).sqrt()).abs() < 1e-12);
    }
}
