//! Regret accounting, run summaries and regret-bound calculators.
//!
//! The bound calculators evaluate asymptotic expressions with explicit
//! constants `c1`, `c2` (default 1). They are diagnostics for exploring the
//! feedback-frequency / feedback-quality trade-off, not predictions of
//! empirical regret.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::feedback::{total_cost, CostModel, FeedbackEvent, FeedbackKind};
use crate::types::ActionIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundLog {
    pub t: u64,
    /// Action actually executed (after any recommendation).
    pub action: ActionIndex,
    pub true_reward: f64,
    /// Reward given to the agent's update.
    pub feedback_reward: f64,
    pub optimal_value: f64,
    pub entropy: f64,
    pub feedback: FeedbackEvent,
}

impl RoundLog {
    pub fn regret(&self) -> f64 {
        self.optimal_value - self.true_reward
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rounds: u64,
    pub cumulative_regret: f64,
    pub cumulative_reward: f64,
    pub feedback_fraction: f64,
    pub ar_count: u64,
    pub rm_count: u64,
    pub cost_adjusted_reward: f64,
}

/// `Σ (optimal_value - true_reward)`. Feedback-manipulated rewards never
/// enter.
pub fn cumulative_regret(logs: &[RoundLog]) -> f64 {
    logs.iter().map(RoundLog::regret).sum()
}

pub fn summarize(logs: &[RoundLog], cost: &CostModel) -> RunSummary {
    let count = |kind| {
        logs.iter()
            .filter(|l| l.feedback.kind == Some(kind))
            .count() as u64
    };
    let ar_count = count(FeedbackKind::Ar);
    let rm_count = count(FeedbackKind::Rm);
    let rounds = logs.len() as u64;
    let cumulative_reward: f64 = logs.iter().map(|l| l.true_reward).sum();
    RunSummary {
        rounds,
        cumulative_regret: cumulative_regret(logs),
        cumulative_reward,
        feedback_fraction: if rounds == 0 {
            0.0
        } else {
            (ar_count + rm_count) as f64 / rounds as f64
        },
        ar_count,
        rm_count,
        cost_adjusted_reward: cumulative_reward - total_cost(cost, ar_count + rm_count),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub rounds: u64,
    pub k: usize,
    /// Probability of requesting feedback.
    pub p: f64,
    /// Expert accuracy.
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BoundParams {
    pub fn new(rounds: u64, k: usize, p: f64, q: f64) -> Self {
        Self {
            rounds,
            k,
            p,
            q,
            c1: 1.0,
            c2: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rounds < 1 {
            return Err(Error::invalid("T must be >= 1"));
        }
        if self.k < 2 {
            return Err(Error::invalid("k must be >= 2"));
        }
        check_probability(self.p, "p")?;
        check_probability(self.q, "q")?;
        if !(self.c1 > 0.0) || !(self.c2 > 0.0) {
            return Err(Error::invalid("bound constants must be positive"));
        }
        Ok(())
    }
}

fn check_probability(v: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(alloc::format!("{name} must lie in [0, 1]")))
    }
}

/// `c1 √((1-p) T k ln T) + c2 p T (1-q) / ((1-q) + ln T)`.
pub fn upper_bound(bp: &BoundParams) -> Result<f64> {
    bp.validate()?;
    if bp.rounds < 2 {
        return Err(Error::invalid("upper bound needs T >= 2 so that ln T > 0"));
    }
    let t = bp.rounds as f64;
    let ln_t = libm::log(t);
    let explore = bp.c1 * libm::sqrt((1.0 - bp.p) * t * bp.k as f64 * ln_t);
    let feedback = bp.c2 * (bp.p * t * (1.0 - bp.q)) / ((1.0 - bp.q) + ln_t);
    Ok(explore + feedback)
}

/// `c1 (1-p) √(T k) + c2 p T / q` with `q = q_AR`.
pub fn lower_bound_ar(bp: &BoundParams) -> Result<f64> {
    lower_bound(bp)
}

/// Same expression as [`lower_bound_ar`] with `q = q_RM`.
pub fn lower_bound_rm(bp: &BoundParams) -> Result<f64> {
    lower_bound(bp)
}

fn lower_bound(bp: &BoundParams) -> Result<f64> {
    bp.validate()?;
    if bp.q == 0.0 {
        return Err(Error::invalid("lower bound diverges at q = 0"));
    }
    let t = bp.rounds as f64;
    Ok(bp.c1 * (1.0 - bp.p) * libm::sqrt(t * bp.k as f64) + bp.c2 * bp.p * t / bp.q)
}

/// Sample mean and standard deviation (`n - 1` denominator, 0 for one run).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateSummary {
    pub runs: usize,
    pub cumulative_regret: MeanStd,
    pub cumulative_reward: MeanStd,
    pub feedback_fraction: MeanStd,
    pub ar_count: MeanStd,
    pub rm_count: MeanStd,
    pub cost_adjusted_reward: MeanStd,
}

/// Welford accumulation of mean and sample variance.
pub fn mean_std(values: impl IntoIterator<Item = f64>) -> Result<MeanStd> {
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for v in values {
        n += 1;
        let delta = v - mean;
        mean += delta / n as f64;
        m2 += delta * (v - mean);
    }
    match n {
        0 => Err(Error::invalid("no values to aggregate")),
        1 => Ok(MeanStd { mean, std: 0.0 }),
        _ => Ok(MeanStd {
            mean,
            std: libm::sqrt((m2 / (n - 1) as f64).max(0.0)),
        }),
    }
}

pub fn aggregate(runs: &[RunSummary]) -> Result<AggregateSummary> {
    if runs.is_empty() {
        return Err(Error::invalid("aggregate needs at least one run"));
    }
    let stat = |f: fn(&RunSummary) -> f64| mean_std(runs.iter().map(f));
    Ok(AggregateSummary {
        runs: runs.len(),
        cumulative_regret: stat(|r| r.cumulative_regret)?,
        cumulative_reward: stat(|r| r.cumulative_reward)?,
        feedback_fraction: stat(|r| r.feedback_fraction)?,
        ar_count: stat(|r| r.ar_count as f64)?,
        rm_count: stat(|r| r.rm_count as f64)?,
        cost_adjusted_reward: stat(|r| r.cost_adjusted_reward)?,
    })
}

/// Per-round regret series, handy for plotting cumulative curves.
pub fn regret_curve(logs: &[RoundLog]) -> Vec<f64> {
    logs.iter()
        .scan(0.0, |acc, l| {
            *acc += l.regret();
            Some(*acc)
        })
        .collect()
}
