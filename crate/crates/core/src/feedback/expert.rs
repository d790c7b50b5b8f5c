use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::ActionIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecommendMode {
    /// Recommend the whole correct set.
    FullLabelSet,
    /// Recommend one correct action, chosen uniformly.
    Singleton,
}

/// Simulated expert of quality `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpertConfig {
    pub quality: f64,
    /// Reward added when an action is judged unrecommended.
    pub rm_penalty: f64,
    pub mode: RecommendMode,
}

impl Default for ExpertConfig {
    fn default() -> Self {
        Self {
            quality: 1.0,
            rm_penalty: -1.0,
            mode: RecommendMode::FullLabelSet,
        }
    }
}

impl ExpertConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.quality) {
            return Err(Error::invalid("expert quality must lie in [0, 1]"));
        }
        if !self.rm_penalty.is_finite() {
            return Err(Error::invalid("rm_penalty must be finite"));
        }
        Ok(())
    }
}

/// Action recommendation. With probability `q` the expert returns the
/// correct set (or one member of it); otherwise, or when no action is
/// correct, a uniformly random singleton. The flag reports whether the
/// correct branch produced the answer.
pub fn expert_ar(
    correct: &[usize],
    cfg: &ExpertConfig,
    k: usize,
    rng: &mut RngStream,
) -> (Vec<usize>, bool) {
    assert!(k >= 1, "expert needs at least one action");
    if rng.bernoulli(cfg.quality) && !correct.is_empty() {
        let set = match cfg.mode {
            RecommendMode::FullLabelSet => correct.to_vec(),
            RecommendMode::Singleton => vec![correct[rng.below(correct.len())]],
        };
        (set, true)
    } else {
        (vec![rng.below(k)], false)
    }
}

/// The learner always follows the recommendation: a uniform member of the
/// set, regardless of its own choice.
pub fn apply_ar(
    _agent_action: ActionIndex,
    recommended: &[usize],
    rng: &mut RngStream,
) -> Result<ActionIndex> {
    if recommended.is_empty() {
        return Err(Error::invalid("empty recommendation set"));
    }
    Ok(ActionIndex::unchecked(
        recommended[rng.below(recommended.len())],
    ))
}

/// Reward manipulation. The expert judges `chosen` against the correct set;
/// with probability `1 - q` the judgment is inverted. Returns the reward
/// delta (`rm_penalty` or 0) and whether the judgment was correct.
pub fn expert_rm(
    chosen: ActionIndex,
    correct: &[usize],
    cfg: &ExpertConfig,
    rng: &mut RngStream,
) -> (f64, bool) {
    let recommended = correct.contains(&chosen.get());
    let judged_correctly = rng.bernoulli(cfg.quality);
    let penalize = if judged_correctly {
        !recommended
    } else {
        recommended
    };
    (
        if penalize { cfg.rm_penalty } else { 0.0 },
        judged_correctly,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: f64) -> ExpertConfig {
        ExpertConfig {
            quality: q,
            ..ExpertConfig::default()
        }
    }

    #[test]
    fn perfect_expert_ar() {
        let mut rng = RngStream::new(0);
        for _ in 0..100 {
            assert_eq!(expert_ar(&[2], &cfg(1.0), 4, &mut rng), (vec![2], true));
        }
    }

    #[test]
    fn singleton_mode_picks_member() {
        let mut rng = RngStream::new(1);
        let c = ExpertConfig {
            quality: 1.0,
            mode: RecommendMode::Singleton,
            ..ExpertConfig::default()
        };
        for _ in 0..100 {
            let (set, ok) = expert_ar(&[1, 3], &c, 5, &mut rng);
            assert!(ok && set.len() == 1 && (set[0] == 1 || set[0] == 3));
        }
    }

    #[test]
    fn empty_truth_falls_back() {
        let mut rng = RngStream::new(2);
        let (set, ok) = expert_ar(&[], &cfg(1.0), 4, &mut rng);
        assert_eq!(set.len(), 1);
        assert!(!ok);
    }

    #[test]
    fn useless_expert_is_uniform() {
        let mut rng = RngStream::new(3);
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            let (set, ok) = expert_ar(&[0], &cfg(0.0), 4, &mut rng);
            assert!(!ok);
            counts[set[0]] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn ar_correct_fraction() {
        let mut rng = RngStream::new(4);
        let n = 10_000;
        let hits = (0..n)
            .filter(|_| expert_ar(&[1], &cfg(0.7), 4, &mut rng).1)
            .count();
        assert!((hits as f64 / n as f64 - 0.7).abs() < 0.02);
    }

    #[test]
    fn apply_ar_ignores_agent() {
        let mut rng = RngStream::new(5);
        assert_eq!(
            apply_ar(ActionIndex::unchecked(0), &[3], &mut rng)
                .unwrap()
                .get(),
            3
        );
        assert!(apply_ar(ActionIndex::unchecked(0), &[], &mut rng).is_err());

        let n = 100_000;
        let ones = (0..n)
            .filter(|_| {
                apply_ar(ActionIndex::unchecked(0), &[1, 2], &mut rng)
                    .unwrap()
                    .get()
                    == 1
            })
            .count();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.01);

        let draw = |agent: usize| {
            let mut rng = RngStream::new(6);
            (0..50)
                .map(|_| apply_ar(ActionIndex::unchecked(agent), &[0, 4, 7], &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(0), draw(5));
    }

    #[test]
    fn rm_examples() {
        let mut rng = RngStream::new(7);
        let c = cfg(1.0);
        assert_eq!(
            expert_rm(ActionIndex::unchecked(2), &[2], &c, &mut rng),
            (0.0, true)
        );
        assert_eq!(
            expert_rm(ActionIndex::unchecked(1), &[2], &c, &mut rng),
            (-1.0, true)
        );
        let inverted = cfg(0.0);
        assert_eq!(
            expert_rm(ActionIndex::unchecked(2), &[2], &inverted, &mut rng),
            (-1.0, false)
        );
        assert_eq!(
            expert_rm(ActionIndex::unchecked(1), &[2], &inverted, &mut rng),
            (0.0, false)
        );
    }

    #[test]
    fn rm_penalty_fraction() {
        let mut rng = RngStream::new(8);
        let n = 10_000;
        let penalized = (0..n)
            .filter(|_| expert_rm(ActionIndex::unchecked(0), &[1], &cfg(0.8), &mut rng).0 < 0.0)
            .count();
        assert!((penalized as f64 / n as f64 - 0.8).abs() < 0.02);
    }
}
