//! Multi-label classification data viewed as a bandit: playing label `a` on
//! instance `t` earns 1 iff `a` is one of the instance's labels.
//!
//! Text format (ASCII, LF line endings):
//!
//! ```text
//! n m k
//! l1,l2,... f1:v1 f2:v2 ...
//! ```
//!
//! The label list may be empty, in which case the line starts with a space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::RoundData;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{Context, RewardKind, RewardVector};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Sparse `(index, value)` pairs in file order.
    pub features: Vec<(usize, f64)>,
    /// Sorted, de-duplicated labels.
    pub labels: Vec<usize>,
}

impl Instance {
    pub fn new(features: Vec<(usize, f64)>, mut labels: Vec<usize>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Self { features, labels }
    }

    /// Sparse dot product against a dense weight vector.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.features.iter().map(|&(i, v)| weights[i] * v).sum()
    }

    pub fn densify(&self, m: usize) -> Vec<f64> {
        let mut dense = vec![0.0; m];
        for &(i, v) in &self.features {
            dense[i] += v;
        }
        dense
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    m: usize,
    k: usize,
    rows: Vec<Instance>,
}

impl MultiLabelDataset {
    pub fn new(m: usize, k: usize, rows: Vec<Instance>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("dataset needs at least one label"));
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(&(f, _)) = row.features.iter().find(|(f, _)| *f >= m) {
                return Err(Error::invalid(format!(
                    "instance {i}: feature index {f} >= m = {m}"
                )));
            }
            if row.features.iter().any(|(_, v)| !v.is_finite()) {
                return Err(Error::invalid(format!("instance {i}: non-finite feature")));
            }
            if let Some(&l) = row.labels.iter().find(|&&l| l >= k) {
                return Err(Error::invalid(format!(
                    "instance {i}: label {l} >= k = {k}"
                )));
            }
        }
        Ok(Self { m, k, rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Instance] {
        &self.rows
    }

    /// Parses the text format. Errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 3 {
            return Err(Error::parse(1, "header must be \"n m k\""));
        }
        let n = parse_usize(dims[0], 1, "n")?;
        let m = parse_usize(dims[1], 1, "m")?;
        let k = parse_usize(dims[2], 1, "k")?;
        if k == 0 {
            return Err(Error::parse(1, "k must be at least 1"));
        }

        let mut rows = Vec::with_capacity(n);
        let mut last_line = 1;
        for (line_no, line) in lines.by_ref() {
            last_line = line_no;
            if rows.len() == n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(line_no, format!("more than {n} instances")));
            }
            rows.push(parse_instance(line, line_no, m, k)?);
        }
        if rows.len() < n {
            return Err(Error::parse(
                last_line + 1,
                format!("expected {n} instances, found {}", rows.len()),
            ));
        }
        Ok(Self { m, k, rows })
    }

    /// Serializes to the text format; `parse(to_text())` reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n(), self.m, self.k);
        for row in &self.rows {
            for (i, l) in row.labels.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{l}");
            }
            for &(f, v) in &row.features {
                let _ = write!(out, " {f}:{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| {
        Error::parse(
            line,
            format!("{what}: expected a non-negative integer, got {tok:?}"),
        )
    })
}

fn parse_instance(line: &str, line_no: usize, m: usize, k: usize) -> Result<Instance> {
    let (label_part, feature_part) = match line.find(' ') {
        Some(pos) => (&line[..pos], &line[pos + 1..]),
        None => (line, ""),
    };
    let mut labels = Vec::new();
    if !label_part.is_empty() {
        for tok in label_part.split(',') {
            let l = parse_usize(tok, line_no, "label")?;
            if l >= k {
                return Err(Error::parse(line_no, format!("label {l} >= k = {k}")));
            }
            labels.push(l);
        }
    }
    let mut features = Vec::new();
    for tok in feature_part.split_whitespace() {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, format!("feature {tok:?} is not index:value")))?;
        let idx = parse_usize(idx, line_no, "feature index")?;
        if idx >= m {
            return Err(Error::parse(
                line_no,
                format!("feature index {idx} >= m = {m}"),
            ));
        }
        let val: f64 = val
            .parse()
            .map_err(|_| Error::parse(line_no, format!("feature value {val:?} is not a number")))?;
        if !val.is_finite() {
            return Err(Error::parse(line_no, "feature value must be finite"));
        }
        features.push((idx, val));
    }
    Ok(Instance::new(features, labels))
}

/// Instance `order[t]` as a bandit round with binary rewards.
pub fn dataset_round(ds: &MultiLabelDataset, order: &[usize], t: usize) -> Result<RoundData> {
    if t >= ds.n() || t >= order.len() {
        return Err(Error::invalid(format!(
            "round {t} out of range for {} instances",
            ds.n().min(order.len())
        )));
    }
    let row = ds
        .rows
        .get(order[t])
        .ok_or_else(|| Error::invalid(format!("order entry {} out of range", order[t])))?;
    let mut rewards = vec![0.0; ds.k];
    for &l in &row.labels {
        rewards[l] = 1.0;
    }
    Ok(RoundData {
        context: Context::new(row.densify(ds.m))?,
        rewards: RewardVector::new(rewards, RewardKind::Binary)?,
        correct_actions: row.labels.clone(),
    })
}

/// Fisher–Yates permutation of `0..n`.
pub fn shuffle_order(n: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        order.swap(i, j);
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyDatasetParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

/// Prototype features per label.
const TOY_PROTOTYPE_FEATURES: usize = 5;
const TOY_NOISE_FEATURES: usize = 3;
const TOY_EXTRA_LABEL_PROB: f64 = 0.3;
const TOY_EMPTY_PROB: f64 = 0.05;

/// Small clustered multi-label dataset: each label owns a sparse prototype,
/// an instance is its primary label's prototype plus a few noise features,
/// normalized to unit length. Some instances carry a second label and a few
/// carry none.
pub fn toy_dataset(params: ToyDatasetParams) -> Result<MultiLabelDataset> {
    let ToyDatasetParams { n, m, k, seed } = params;
    if m == 0 || k == 0 {
        return Err(Error::invalid("toy dataset needs m >= 1 and k >= 1"));
    }
    let mut rng = RngStream::new(seed);
    let prototypes: Vec<Vec<(usize, f64)>> = (0..k)
        .map(|_| {
            (0..TOY_PROTOTYPE_FEATURES)
                .map(|_| (rng.below(m), 0.5 + rng.uniform()))
                .collect()
        })
        .collect();

    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut dense: BTreeMap<usize, f64> = BTreeMap::new();
        let mut labels = Vec::new();
        if !rng.bernoulli(TOY_EMPTY_PROB) {
            let primary = rng.below(k);
            labels.push(primary);
            for &(f, v) in &prototypes[primary] {
                *dense.entry(f).or_insert(0.0) += v;
            }
            if rng.bernoulli(TOY_EXTRA_LABEL_PROB) {
                labels.push(rng.below(k));
            }
        }
        for _ in 0..TOY_NOISE_FEATURES {
            let f = rng.below(m);
            *dense.entry(f).or_insert(0.0) += 0.5 * rng.uniform();
        }
        let norm = libm::sqrt(dense.values().map(|v| v * v).sum::<f64>());
        let features = dense
            .into_iter()
            .map(|(f, v)| (f, if norm > 0.0 { v / norm } else { v }))
            .collect();
        rows.push(Instance::new(features, labels));
    }
    MultiLabelDataset::new(m, k, rows)
}
