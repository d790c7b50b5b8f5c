use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Index of an action (arm, label) in `[0, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionIndex(usize);

impl ActionIndex {
    pub fn new(index: usize, k: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::invalid(alloc::format!(
                "action {index} out of range for {k} actions"
            )));
        }
        Ok(Self(index))
    }

    /// Caller guarantees `index < k`.
    pub(crate) fn unchecked(index: usize) -> Self {
        Self(index)
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for ActionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<ActionIndex> for usize {
    fn from(a: ActionIndex) -> usize {
        a.0
    }
}

/// Dense feature vector observed at the start of a round.
#[derive(Debug, Clone, PartialEq)]
pub struct Context(Vec<f64>);

impl Context {
    pub fn new(features: Vec<f64>) -> Result<Self> {
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("context features must be finite"));
        }
        Ok(Self(features))
    }

    pub fn features(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardKind {
    Binary,
    Continuous,
}

/// Per-action rewards for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardVector {
    values: Vec<f64>,
    kind: RewardKind,
}

impl RewardVector {
    pub fn new(values: Vec<f64>, kind: RewardKind) -> Result<Self> {
        let ok = match kind {
            RewardKind::Binary => values.iter().all(|&v| v == 0.0 || v == 1.0),
            RewardKind::Continuous => values.iter().all(|v| (0.0..=1.0).contains(v)),
        };
        if !ok {
            return Err(Error::invalid(match kind {
                RewardKind::Binary => "binary rewards must be 0 or 1",
                RewardKind::Continuous => "continuous rewards must lie in [0, 1]",
            }));
        }
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> RewardKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, action: ActionIndex) -> f64 {
        self.values[action.get()]
    }

    /// Largest entry; 0 for an empty vector.
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }
}
