//! TOML experiment configuration.
//!
//! Every key except `[env]` and `[agent]` has a default. [`ExperimentConfig::load`]
//! fills in the defaults that depend on other keys (`gate.horizon`,
//! `env.theta_seed`) so that the echo written next to the results is fully
//! explicit and reproduces the run when fed back in.

use std::path::{Path, PathBuf};

use cbhf_core::agents::AgentSpec;
use cbhf_core::feedback::{
    CostModel, ExpertConfig, FeedbackKind, FeedbackMode, GatePolicy, RecommendMode,
};
use cbhf_core::sim::RunSpec;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Entropy thresholds swept by default: the union of the per-dataset
/// threshold lists used in the original experiments.
pub const DEFAULT_LAMBDAS: [f64; 9] = [1.5, 2.5, 3.0, 3.5, 4.5, 5.0, 6.5, 7.0, 9.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_rounds")]
    pub rounds: u64,
    #[serde(default = "default_runs")]
    pub runs: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Worker threads; 0 lets rayon pick.
    #[serde(default)]
    pub threads: usize,
    /// Feedback requested when a gate fires.
    #[serde(default)]
    pub feedback: FeedbackType,
    pub env: EnvConfig,
    pub agent: AgentConfig,
    #[serde(default)]
    pub gate: GateConfig,
    #[serde(default)]
    pub expert: ExpertSection,
    #[serde(default)]
    pub cost: CostSection,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackType {
    #[default]
    Ar,
    Rm,
    /// AR above the gate threshold, RM below it.
    Hybrid,
}

impl FeedbackType {
    pub fn mode(self) -> FeedbackMode {
        match self {
            FeedbackType::Ar => FeedbackMode::Single(FeedbackKind::Ar),
            FeedbackType::Rm => FeedbackMode::Single(FeedbackKind::Rm),
            FeedbackType::Hybrid => FeedbackMode::Hybrid,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackType::Ar => "AR",
            FeedbackType::Rm => "RM",
            FeedbackType::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvConfig {
    /// Linear rewards `x^T θ* + noise` over `k` per-action feature vectors.
    Synthetic {
        #[serde(default = "default_ten")]
        d: usize,
        #[serde(default = "default_ten")]
        k: usize,
        #[serde(default = "default_noise")]
        noise_sigma: f64,
        #[serde(default)]
        nonlinear: bool,
        /// Probability that an action slot carries reward.
        #[serde(default = "default_one")]
        sparsity_rho: f64,
        /// Seed of θ*; defaults to the top-level seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta_seed: Option<u64>,
    },
    /// Multi-label dataset file, path relative to the working directory.
    Dataset { path: PathBuf },
    /// Generated clustered multi-label dataset.
    Toy {
        #[serde(default = "default_toy_n")]
        n: usize,
        #[serde(default = "default_toy_m")]
        m: usize,
        #[serde(default = "default_ten")]
        k: usize,
        #[serde(default)]
        seed: u64,
    },
}

impl EnvConfig {
    /// Label used in the `env` column of summary files.
    pub fn label(&self) -> String {
        match self {
            EnvConfig::Synthetic { .. } => "synthetic".into(),
            EnvConfig::Toy { .. } => "toy".into(),
            EnvConfig::Dataset { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AgentConfig {
    EpsilonGreedy {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
    Ucb1 {
        #[serde(default = "default_one")]
        c: f64,
        #[serde(default = "default_one")]
        temperature: f64,
    },
    Linucb {
        #[serde(default = "default_one")]
        alpha: f64,
        #[serde(default = "default_one")]
        temperature: f64,
    },
    BootstrappedTs {
        #[serde(default = "default_replicates")]
        replicates: usize,
        #[serde(default = "default_half")]
        update_prob: f64,
        #[serde(default = "default_one")]
        prior_scale: f64,
    },
    SoftmaxLinear {
        #[serde(default = "default_one")]
        learning_rate: f64,
        #[serde(default = "default_one")]
        temperature: f64,
    },
    HybridLinear {
        #[serde(default = "default_alpha")]
        learning_rate: f64,
        #[serde(default = "default_reg")]
        reg: f64,
        #[serde(default)]
        sample_actions: bool,
    },
}

impl AgentConfig {
    pub fn spec(&self) -> AgentSpec {
        match *self {
            AgentConfig::EpsilonGreedy { epsilon } => AgentSpec::EpsilonGreedy { epsilon },
            AgentConfig::Ucb1 { c, temperature } => AgentSpec::Ucb1 { c, temperature },
            AgentConfig::Linucb { alpha, temperature } => AgentSpec::LinUcb { alpha, temperature },
            AgentConfig::BootstrappedTs {
                replicates,
                update_prob,
                prior_scale,
            } => AgentSpec::BootstrappedTs {
                replicates,
                update_prob,
                prior_scale,
            },
            AgentConfig::SoftmaxLinear {
                learning_rate,
                temperature,
            } => AgentSpec::SoftmaxLinear {
                learning_rate,
                temperature,
            },
            AgentConfig::HybridLinear {
                learning_rate,
                reg,
                sample_actions,
            } => AgentSpec::HybridLinear {
                learning_rate,
                reg,
                sample_actions,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GateConfig {
    FixedEntropy {
        lambda: f64,
    },
    Periodic {
        every: u64,
    },
    HybridDynamic {
        #[serde(default = "default_tau_init")]
        tau_init: f64,
        #[serde(default = "default_tau_max")]
        tau_max: f64,
        /// Rounds over which the threshold ramps; defaults to `rounds`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<u64>,
    },
    Always,
    #[default]
    Never,
}

impl GateConfig {
    pub fn policy(&self, rounds: u64) -> GatePolicy {
        match *self {
            GateConfig::FixedEntropy { lambda } => GatePolicy::FixedEntropy { lambda },
            GateConfig::Periodic { every } => GatePolicy::Periodic { every },
            GateConfig::HybridDynamic {
                tau_init,
                tau_max,
                horizon,
            } => GatePolicy::HybridDynamic {
                tau_init,
                tau_max,
                horizon: horizon.unwrap_or(rounds),
            },
            GateConfig::Always => GatePolicy::Always,
            GateConfig::Never => GatePolicy::Never,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            GateConfig::FixedEntropy { lambda } => Some(lambda),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecommendModeConfig {
    #[default]
    FullLabelSet,
    Singleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpertSection {
    #[serde(default = "default_quality")]
    pub quality: f64,
    #[serde(default = "default_penalty")]
    pub rm_penalty: f64,
    #[serde(default)]
    pub mode: RecommendModeConfig,
}

impl Default for ExpertSection {
    fn default() -> Self {
        Self {
            quality: default_quality(),
            rm_penalty: default_penalty(),
            mode: RecommendModeConfig::default(),
        }
    }
}

impl ExpertSection {
    pub fn expert(&self) -> ExpertConfig {
        ExpertConfig {
            quality: self.quality,
            rm_penalty: self.rm_penalty,
            mode: match self.mode {
                RecommendModeConfig::FullLabelSet => RecommendMode::FullLabelSet,
                RecommendModeConfig::Singleton => RecommendMode::Singleton,
            },
        }
    }
}

/// Per-query solicitation costs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    #[serde(default)]
    pub c_human: f64,
    #[serde(default)]
    pub c_system: f64,
    #[serde(default)]
    pub c_opportunity: f64,
}

fn default_rounds() -> u64 {
    1000
}
fn default_runs() -> u64 {
    5
}
fn default_seed() -> u64 {
    42
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_ten() -> usize {
    10
}
fn default_noise() -> f64 {
    0.1
}
fn default_toy_n() -> usize {
    500
}
fn default_toy_m() -> usize {
    50
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_one() -> f64 {
    1.0
}
fn default_half() -> f64 {
    0.5
}
fn default_replicates() -> usize {
    10
}
fn default_alpha() -> f64 {
    0.1
}
fn default_reg() -> f64 {
    0.01
}
fn default_tau_init() -> f64 {
    0.5
}
fn default_tau_max() -> f64 {
    1.5
}
fn default_quality() -> f64 {
    1.0
}
fn default_penalty() -> f64 {
    -1.0
}

impl ExperimentConfig {
    /// Parses TOML text, resolves dependent defaults and validates.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            HarnessError::config(
                "config",
                e.message().to_string() + &line_hint(text, e.span()),
            )
        })?;
        cfg.resolve();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Replaces implicit defaults that depend on other keys with explicit
    /// values. Call again after changing `rounds` or `seed`.
    pub fn resolve(&mut self) {
        if let EnvConfig::Synthetic { theta_seed, .. } = &mut self.env {
            theta_seed.get_or_insert(self.seed);
        }
        if let GateConfig::HybridDynamic { horizon, .. } = &mut self.gate {
            horizon.get_or_insert(self.rounds);
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(HarnessError::config("rounds", "must be >= 1"));
        }
        if self.runs == 0 {
            return Err(HarnessError::config("runs", "must be >= 1"));
        }
        self.validate_env()?;
        self.validate_agent()?;
        self.validate_gate()?;
        let e = &self.expert;
        check(
            (0.0..=1.0).contains(&e.quality),
            "expert.quality",
            "must lie in [0, 1]",
        )?;
        check(
            e.rm_penalty.is_finite(),
            "expert.rm_penalty",
            "must be finite",
        )?;
        for (name, v) in [
            ("cost.c_human", self.cost.c_human),
            ("cost.c_system", self.cost.c_system),
            ("cost.c_opportunity", self.cost.c_opportunity),
        ] {
            check(v.is_finite() && v >= 0.0, name, "must be finite and >= 0")?;
        }
        self.run_spec()
            .validate()
            .map_err(|e| HarnessError::config("config", e.to_string()))
    }

    fn validate_env(&self) -> Result<()> {
        match self.env {
            EnvConfig::Synthetic {
                d,
                k,
                noise_sigma,
                sparsity_rho,
                ..
            } => {
                check(d >= 1, "env.d", "must be >= 1")?;
                check(k >= 1, "env.k", "must be >= 1")?;
                check(
                    noise_sigma.is_finite() && noise_sigma >= 0.0,
                    "env.noise_sigma",
                    "must be finite and >= 0",
                )?;
                check(
                    (0.0..=1.0).contains(&sparsity_rho),
                    "env.sparsity_rho",
                    "must lie in [0, 1]",
                )
            }
            EnvConfig::Dataset { ref path } => check(
                !path.as_os_str().is_empty(),
                "env.path",
                "must not be empty",
            ),
            EnvConfig::Toy { n, m, k, .. } => {
                check(n >= 1, "env.n", "must be >= 1")?;
                check(m >= 1, "env.m", "must be >= 1")?;
                check(k >= 1, "env.k", "must be >= 1")?;
                check(
                    self.rounds <= n as u64,
                    "rounds",
                    "exceeds the number of dataset instances",
                )
            }
        }
    }

    fn validate_agent(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        match self.agent {
            AgentConfig::EpsilonGreedy { epsilon } => check(
                (0.0..=1.0).contains(&epsilon),
                "agent.epsilon",
                "must lie in [0, 1]",
            ),
            AgentConfig::Ucb1 { c, temperature } => {
                check(non_negative(c), "agent.c", "must be finite and >= 0")?;
                check(positive(temperature), "agent.temperature", "must be > 0")
            }
            AgentConfig::Linucb { alpha, temperature } => {
                check(
                    non_negative(alpha),
                    "agent.alpha",
                    "must be finite and >= 0",
                )?;
                check(positive(temperature), "agent.temperature", "must be > 0")
            }
            AgentConfig::BootstrappedTs {
                replicates,
                update_prob,
                prior_scale,
            } => {
                check(replicates >= 1, "agent.replicates", "must be >= 1")?;
                check(
                    update_prob > 0.0 && update_prob <= 1.0,
                    "agent.update_prob",
                    "must lie in (0, 1]",
                )?;
                check(
                    non_negative(prior_scale),
                    "agent.prior_scale",
                    "must be finite and >= 0",
                )
            }
            AgentConfig::SoftmaxLinear {
                learning_rate,
                temperature,
            } => {
                check(
                    non_negative(learning_rate),
                    "agent.learning_rate",
                    "must be finite and >= 0",
                )?;
                check(positive(temperature), "agent.temperature", "must be > 0")
            }
            AgentConfig::HybridLinear {
                learning_rate, reg, ..
            } => {
                check(
                    non_negative(learning_rate),
                    "agent.learning_rate",
                    "must be finite and >= 0",
                )?;
                check(non_negative(reg), "agent.reg", "must be finite and >= 0")
            }
        }
    }

    fn validate_gate(&self) -> Result<()> {
        match self.gate {
            GateConfig::FixedEntropy { lambda } => check(
                lambda.is_finite() && lambda >= 0.0,
                "gate.lambda",
                "must be finite and >= 0",
            ),
            GateConfig::Periodic { every } => check(every >= 1, "gate.every", "must be >= 1"),
            GateConfig::HybridDynamic {
                tau_init,
                tau_max,
                horizon,
            } => {
                check(tau_init.is_finite(), "gate.tau_init", "must be finite")?;
                check(
                    tau_max.is_finite() && tau_max >= tau_init,
                    "gate.tau_max",
                    "must be finite and >= tau_init",
                )?;
                check(horizon != Some(0), "gate.horizon", "must be >= 1")
            }
            GateConfig::Always | GateConfig::Never => Ok(()),
        }
    }

    pub fn run_spec(&self) -> RunSpec {
        RunSpec {
            rounds: self.rounds,
            agent: self.agent.spec(),
            gate: self.gate.policy(self.rounds),
            mode: self.feedback.mode(),
            expert: self.expert.expert(),
            cost: CostModel {
                c_human: self.cost.c_human,
                c_system: self.cost.c_system,
                c_opportunity: self.cost.c_opportunity,
            },
        }
    }
}

fn check(ok: bool, field: &str, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(HarnessError::config(field, message))
    }
}

fn line_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(span) => {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}
