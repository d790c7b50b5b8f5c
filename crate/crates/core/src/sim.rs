//! One simulated run of the entropy-gated feedback loop.

use alloc::format;
use alloc::vec::Vec;

use crate::agents::{Agent, AgentSpec, AgentState, Observation};
use crate::analysis::{summarize, RoundLog, RunSummary};
use crate::env::{
    dataset_round, shuffle_order, synthetic_round, MultiLabelDataset, RoundData, SyntheticEnvParams,
};
use crate::error::{Error, Result};
use crate::feedback::{
    apply_ar, expert_ar, expert_rm, gate_decide, CostModel, ExpertConfig, FeedbackEvent,
    FeedbackKind, FeedbackMode, GateDecision, GatePolicy,
};
use crate::rng::RngStream;
use crate::simplex::entropy;

/// ChaCha stream ids carved out of a run seed. Keeping roles on separate
/// streams means two runs with the same seed see the same environment
/// regardless of how many draws their agents or experts make.
pub const STREAM_ENV: u64 = 1;
pub const STREAM_AGENT_INIT: u64 = 2;
pub const STREAM_AGENT: u64 = 3;
pub const STREAM_EXPERT: u64 = 4;

/// Seed of run `run` under `base_seed`.
pub fn run_seed(base_seed: u64, run: u64) -> u64 {
    base_seed ^ run
}

#[derive(Debug, Clone, Copy)]
pub enum EnvRef<'a> {
    Synthetic(&'a SyntheticEnvParams),
    Dataset(&'a MultiLabelDataset),
}

impl EnvRef<'_> {
    pub fn num_actions(&self) -> usize {
        match self {
            EnvRef::Synthetic(p) => p.k(),
            EnvRef::Dataset(ds) => ds.k(),
        }
    }

    pub fn context_dim(&self) -> usize {
        match self {
            EnvRef::Synthetic(p) => p.d(),
            EnvRef::Dataset(ds) => ds.m(),
        }
    }

    pub fn action_dim(&self) -> Option<usize> {
        match self {
            EnvRef::Synthetic(p) => Some(p.d()),
            EnvRef::Dataset(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub rounds: u64,
    pub agent: AgentSpec,
    pub gate: GatePolicy,
    pub mode: FeedbackMode,
    pub expert: ExpertConfig,
    pub cost: CostModel,
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::invalid("rounds must be >= 1"));
        }
        self.gate.validate()?;
        self.expert.validate()?;
        self.cost.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub logs: Vec<RoundLog>,
    pub summary: RunSummary,
}

enum Rounds<'a> {
    Synthetic {
        params: &'a SyntheticEnvParams,
        rng: RngStream,
    },
    Dataset {
        ds: &'a MultiLabelDataset,
        order: Vec<usize>,
    },
}

/// Executes one run seeded by `seed` (normally [`run_seed`]).
pub fn run_once(env: EnvRef<'_>, spec: &RunSpec, seed: u64) -> Result<RunOutput> {
    spec.validate()?;
    let root = RngStream::new(seed);
    let mut env_rng = root.substream(STREAM_ENV);
    let mut agent_rng = root.substream(STREAM_AGENT);
    let mut expert_rng = root.substream(STREAM_EXPERT);

    let k = env.num_actions();
    let mut agent = spec.agent.build(
        k,
        env.context_dim(),
        env.action_dim(),
        &mut root.substream(STREAM_AGENT_INIT),
    )?;

    let rounds = match env {
        EnvRef::Synthetic(params) => Rounds::Synthetic {
            params,
            rng: env_rng,
        },
        EnvRef::Dataset(ds) => {
            if spec.rounds > ds.n() as u64 {
                return Err(Error::invalid(format!(
                    "rounds = {} exceeds the dataset's {} instances",
                    spec.rounds,
                    ds.n()
                )));
            }
            Rounds::Dataset {
                ds,
                order: shuffle_order(ds.n(), &mut env_rng),
            }
        }
    };

    let mut logs = Vec::with_capacity(spec.rounds as usize);
    for t in 0..spec.rounds {
        let log = match &rounds {
            Rounds::Synthetic { params, rng } => {
                let round = synthetic_round(params, t, rng);
                let obs = Observation::with_action_features(
                    round.data.context.features(),
                    &round.action_features,
                );
                step(
                    t,
                    &round.data,
                    &obs,
                    &mut agent,
                    spec,
                    &mut agent_rng,
                    &mut expert_rng,
                )?
            }
            Rounds::Dataset { ds, order } => {
                let data = dataset_round(ds, order, t as usize)?;
                let obs = Observation::new(data.context.features());
                step(
                    t,
                    &data,
                    &obs,
                    &mut agent,
                    spec,
                    &mut agent_rng,
                    &mut expert_rng,
                )?
            }
        };
        logs.push(log);
    }
    let summary = summarize(&logs, &spec.cost);
    Ok(RunOutput { logs, summary })
}

fn step(
    t: u64,
    data: &RoundData,
    obs: &Observation<'_>,
    agent: &mut AgentState,
    spec: &RunSpec,
    agent_rng: &mut RngStream,
    expert_rng: &mut RngStream,
) -> Result<RoundLog> {
    let k = agent.num_actions();
    let (proposed, policy) = agent.act(obs, agent_rng)?;
    let h = entropy(&policy);
    let rewards = &data.rewards;
    let proposed_reward = rewards.get(proposed);

    let (action, feedback_reward, feedback) = match gate_decide(&spec.gate, h, t, spec.mode) {
        GateDecision::NoFeedback => (
            proposed,
            proposed_reward,
            FeedbackEvent::none(t, proposed_reward),
        ),
        GateDecision::Request(FeedbackKind::Ar) => {
            let (set, correct) = expert_ar(&data.correct_actions, &spec.expert, k, expert_rng);
            let action = apply_ar(proposed, &set, expert_rng)?;
            let r = rewards.get(action);
            let event = FeedbackEvent {
                round: t,
                kind: Some(FeedbackKind::Ar),
                recommended_set: set,
                expert_correct: correct,
                reward_before: proposed_reward,
                reward_after: r,
            };
            (action, r, event)
        }
        GateDecision::Request(FeedbackKind::Rm) => {
            let (delta, correct) =
                expert_rm(proposed, &data.correct_actions, &spec.expert, expert_rng);
            let r = proposed_reward + delta;
            let event = FeedbackEvent {
                round: t,
                kind: Some(FeedbackKind::Rm),
                recommended_set: data.correct_actions.clone(),
                expert_correct: correct,
                reward_before: proposed_reward,
                reward_after: r,
            };
            (proposed, r, event)
        }
    };

    agent.update(obs, action, feedback_reward, agent_rng)?;
    Ok(RoundLog {
        t,
        action,
        true_reward: rewards.get(action),
        feedback_reward,
        optimal_value: data.optimal_value(),
        entropy: h,
        feedback,
    })
}
