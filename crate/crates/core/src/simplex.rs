//! Probability-simplex utilities shared by agents and gates.
//!
//! Entropy is measured in nats. Ties are broken towards the lowest index.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::ActionIndex;

/// Absolute tolerance on the sum of a distribution.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Probability distribution over `k` actions.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDistribution {
    probs: Vec<f64>,
}

impl PolicyDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("distribution over zero actions"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invalid(
                "probabilities must be finite and non-negative",
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::invalid(alloc::format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform distribution over zero actions");
        Self {
            probs: vec![1.0 / k as f64; k],
        }
    }

    pub fn one_hot(k: usize, index: usize) -> Self {
        assert!(index < k);
        let mut probs = vec![0.0; k];
        probs[index] = 1.0;
        Self { probs }
    }

    /// Normalizes non-negative weights. Fails when every weight is zero.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("weights sum to zero"));
        }
        let probs = weights.into_iter().map(|w| w / total).collect();
        Self::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, action: ActionIndex) -> f64 {
        self.probs[action.get()]
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    pub fn argmax(&self) -> ActionIndex {
        argmax_index(&self.probs)
    }

    pub fn sample(&self, rng: &mut RngStream) -> ActionIndex {
        sample(self, rng)
    }
}

/// Temperature-scaled softmax with max-subtraction.
pub fn softmax(scores: &[f64], temperature: f64) -> Result<PolicyDistribution> {
    if scores.is_empty() {
        return Err(Error::invalid("softmax of empty score vector"));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::invalid(
            "softmax temperature must be positive and finite",
        ));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("softmax scores must be finite"));
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = scores
        .iter()
        .map(|s| libm::exp((s - max) / temperature))
        .collect();
    // the max entry contributes exp(0) = 1, so the sum is at least 1
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Ok(PolicyDistribution { probs })
}

/// Shannon entropy in nats with `0 ln 0 = 0`, clamped to `[0, ln k]`.
pub fn entropy(policy: &PolicyDistribution) -> f64 {
    let h: f64 = policy
        .probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log(p))
        .sum();
    h.clamp(0.0, libm::log(policy.len() as f64))
}

/// Inverse-CDF draw from a single uniform. Never returns a zero-probability
/// index.
pub fn sample(policy: &PolicyDistribution, rng: &mut RngStream) -> ActionIndex {
    let u = rng.uniform();
    let mut cum = 0.0;
    let mut last_positive = 0;
    for (i, &p) in policy.probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cum += p;
        last_positive = i;
        if u < cum {
            return ActionIndex::unchecked(i);
        }
    }
    // rounding left cum slightly below u
    ActionIndex::unchecked(last_positive)
}

/// Smallest index attaining the maximum.
pub fn argmax_tiebreak(values: &[f64]) -> Result<ActionIndex> {
    if values.is_empty() {
        return Err(Error::invalid("argmax of empty vector"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("argmax input contains NaN"));
    }
    Ok(argmax_index(values))
}

pub(crate) fn argmax_index(values: &[f64]) -> ActionIndex {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    ActionIndex::unchecked(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn softmax_equal_scores_uniform() {
        for c in [-3.0, 0.0, 17.5] {
            let p = softmax(&[c, c, c], 1.0).unwrap();
            for &x in p.probs() {
                assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn softmax_ln2() {
        let p = softmax(&[0.0, LN_2], 1.0).unwrap();
        assert_abs_diff_eq!(p.probs()[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probs()[1], 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn softmax_one_two_three() {
        // e^i / (e + e^2 + e^3) evaluated at 30 digits
        let expected = [
            0.090_030_573_170_380_457_998,
            0.244_728_471_054_797_652_47,
            0.665_240_955_774_821_889_53,
        ];
        let p = softmax(&[1.0, 2.0, 3.0], 1.0).unwrap();
        for (a, b) in p.probs().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(p.probs()[0] < p.probs()[1] && p.probs()[1] < p.probs()[2]);
    }

    #[test]
    fn softmax_rejects_bad_input() {
        assert!(softmax(&[1.0, f64::NAN], 1.0).is_err());
        assert!(softmax(&[1.0, f64::INFINITY], 1.0).is_err());
        assert!(softmax(&[1.0], 0.0).is_err());
        assert!(softmax(&[1.0], -1.0).is_err());
        assert!(softmax(&[], 1.0).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(
            entropy(&PolicyDistribution::uniform(4)),
            4f64.ln(),
            epsilon = 1e-12
        );
        assert_eq!(entropy(&PolicyDistribution::one_hot(5, 2)), 0.0);
        let p = PolicyDistribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        // 1.5 ln 2 at 30 digits
        assert_abs_diff_eq!(entropy(&p), 1.039_720_770_839_917_964, epsilon = 1e-12);
    }

    #[test]
    fn distribution_validation() {
        assert!(PolicyDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(PolicyDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(PolicyDistribution::new(vec![]).is_err());
        assert!(PolicyDistribution::new(vec![0.5, 0.5 + 1e-10]).is_ok());
        assert!(PolicyDistribution::from_weights(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_tiebreak(&[1.0, 3.0, 2.0]).unwrap().get(), 1);
        assert_eq!(argmax_tiebreak(&[5.0, 5.0, 5.0]).unwrap().get(), 0);
        assert_eq!(argmax_tiebreak(&[-1.0, -0.5, -0.5]).unwrap().get(), 1);
        assert!(argmax_tiebreak(&[]).is_err());
    }

    #[test]
    fn sample_one_hot() {
        let p = PolicyDistribution::one_hot(4, 2);
        let mut rng = RngStream::new(3);
        for _ in 0..1000 {
            assert_eq!(sample(&p, &mut rng).get(), 2);
        }
    }

    fn frequency_of_zero(probs: Vec<f64>, seed: u64) -> f64 {
        let p = PolicyDistribution::new(probs).unwrap();
        let mut rng = RngStream::new(seed);
        let n = 100_000;
        let hits = (0..n).filter(|_| sample(&p, &mut rng).get() == 0).count();
        hits as f64 / n as f64
    }

    #[test]
    fn sample_frequencies() {
        // 4 sigma of Binomial(1e5, 0.5) is 0.0063, of (1e5, 0.9) is 0.0038
        assert!((frequency_of_zero(vec![0.5, 0.5], 11) - 0.5).abs() < 0.01);
        assert!((frequency_of_zero(vec![0.9, 0.1], 12) - 0.9).abs() < 0.01);
    }

    #[test]
    fn sample_chi_square() {
        // critical value of chi^2 at p = 0.001: df=2 -> 13.816, df=3 -> 16.266, df=4 -> 18.467
        let cases: [(&[f64], f64); 3] = [
            (&[0.2, 0.3, 0.5], 13.816),
            (&[0.1, 0.1, 0.1, 0.7], 16.266),
            (&[0.05, 0.15, 0.2, 0.25, 0.35], 18.467),
        ];
        let n = 100_000;
        for (i, (probs, critical)) in cases.iter().enumerate() {
            let p = PolicyDistribution::new(probs.to_vec()).unwrap();
            let mut rng = RngStream::new(100 + i as u64);
            let mut counts = vec![0usize; probs.len()];
            for _ in 0..n {
                counts[sample(&p, &mut rng).get()] += 1;
            }
            let chi2: f64 = counts
                .iter()
                .zip(probs.iter())
                .map(|(&c, &q)| {
                    let e = q * n as f64;
                    (c as f64 - e).powi(2) / e
                })
                .sum();
            assert!(chi2 < *critical, "case {i}: chi2 = {chi2}");
        }
    }

    fn scores(max_len: usize, magnitude: f64) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-magnitude..magnitude, 1..max_len)
    }

    proptest! {
        #[test]
        fn softmax_sums_to_one(s in scores(40, 1e4), temp in 0.01f64..100.0) {
            let p = softmax(&s, temp).unwrap();
            let sum: f64 = p.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn softmax_shift_invariant(s in scores(20, 50.0), c in -100.0f64..100.0) {
            let shifted: Vec<f64> = s.iter().map(|x| x + c).collect();
            let a = softmax(&s, 1.0).unwrap();
            let b = softmax(&shifted, 1.0).unwrap();
            for (x, y) in a.probs().iter().zip(b.probs()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn entropy_monotone_in_temperature(s in scores(12, 10.0)) {
            let grid = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0, 50.0];
            let hs: Vec<f64> = grid.iter().map(|&t| entropy(&softmax(&s, t).unwrap())).collect();
            for w in hs.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12, "{:?}", hs);
            }
        }

        #[test]
        fn entropy_bounds(w in prop::collection::vec(0.0f64..1.0, 1..30)) {
            prop_assume!(w.iter().sum::<f64>() > 1e-6);
            let p = PolicyDistribution::from_weights(w).unwrap();
            let h = entropy(&p);
            prop_assert!(h >= 0.0 && h <= (p.len() as f64).ln());
        }

        #[test]
        fn softmax_preserves_argmax(s in scores(20, 30.0), temp in 0.05f64..20.0) {
            let p = softmax(&s, temp).unwrap();
            // distinct maxima may collapse to equal probabilities only when the
            // gap underflows, which the score range here rules out
            prop_assert_eq!(argmax_tiebreak(p.probs()).unwrap(), argmax_tiebreak(&s).unwrap());
        }
    }
}
