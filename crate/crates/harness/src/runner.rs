//! Runs configured experiments and writes their artifacts.

use std::path::{Path, PathBuf};

use cbhf_core::analysis::{aggregate, RunSummary};
use cbhf_core::env::{toy_dataset, MultiLabelDataset, SyntheticEnvParams, ToyDatasetParams};
use cbhf_core::sim::{run_once, run_seed, EnvRef, RunOutput};
use rayon::prelude::*;

use crate::config::{EnvConfig, ExperimentConfig, GateConfig};
use crate::error::{HarnessError, Result};
use crate::io::{
    load_xmlc, write_atomic, write_grid_csv, write_round_csv, write_summary_csv, GridRow,
    SummaryRow,
};

/// Environment materialized from an [`EnvConfig`].
#[derive(Debug, Clone)]
pub enum LoadedEnv {
    Synthetic(SyntheticEnvParams),
    Dataset(MultiLabelDataset),
}

impl LoadedEnv {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self> {
        let env = match cfg.env {
            EnvConfig::Synthetic {
                d,
                k,
                noise_sigma,
                nonlinear,
                sparsity_rho,
                theta_seed,
            } => LoadedEnv::Synthetic(SyntheticEnvParams::with_random_theta(
                d,
                k,
                noise_sigma,
                nonlinear,
                sparsity_rho,
                theta_seed.unwrap_or(cfg.seed),
            )?),
            EnvConfig::Dataset { ref path } => LoadedEnv::Dataset(load_xmlc(path)?),
            EnvConfig::Toy { n, m, k, seed } => {
                LoadedEnv::Dataset(toy_dataset(ToyDatasetParams { n, m, k, seed })?)
            }
        };
        if let LoadedEnv::Dataset(ds) = &env {
            if cfg.rounds > ds.n() as u64 {
                return Err(HarnessError::config(
                    "rounds",
                    format!(
                        "{} rounds requested but the dataset has {} instances",
                        cfg.rounds,
                        ds.n()
                    ),
                ));
            }
        }
        Ok(env)
    }

    pub fn as_ref(&self) -> EnvRef<'_> {
        match self {
            LoadedEnv::Synthetic(p) => EnvRef::Synthetic(p),
            LoadedEnv::Dataset(ds) => EnvRef::Dataset(ds),
        }
    }
}

/// Output of one run of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run: u64,
    pub output: RunOutput,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::config("threads", e.to_string()))
}

/// Runs every seed of `cfg`, in parallel on `cfg.threads` workers. Results
/// come back in run order whatever the thread count.
pub fn run_experiment(cfg: &ExperimentConfig, env: &LoadedEnv) -> Result<Vec<RunResult>> {
    let spec = cfg.run_spec();
    pool(cfg.threads)?.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|run| {
                let output = run_once(env.as_ref(), &spec, run_seed(cfg.seed, run))?;
                Ok(RunResult { run, output })
            })
            .collect()
    })
}

pub fn summary_row(cfg: &ExperimentConfig, run: u64, s: &RunSummary) -> SummaryRow {
    SummaryRow {
        env: cfg.env.label(),
        agent: cfg.agent.spec().name().to_string(),
        gate: cfg.gate.policy(cfg.rounds).name().to_string(),
        feedback_type: cfg.feedback.as_str().to_string(),
        lambda: cfg.gate.lambda(),
        q: cfg.expert.quality,
        run,
        cum_regret: s.cumulative_regret,
        cum_reward: s.cumulative_reward,
        feedback_fraction: s.feedback_fraction,
        ar_count: s.ar_count,
        rm_count: s.rm_count,
        cost_adjusted_reward: s.cost_adjusted_reward,
    }
}

/// Files produced by [`execute_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub round_csvs: Vec<PathBuf>,
    pub summary_csv: PathBuf,
    pub config_echo: PathBuf,
}

pub fn round_csv_path(out_dir: &Path, run: u64) -> PathBuf {
    out_dir.join(format!("rounds_run{run}.csv"))
}

fn prepare_out_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| HarnessError::io(&cfg.out_dir, e))?;
    let echo = cfg.out_dir.join("config.toml");
    write_atomic(&echo, cfg.to_toml().as_bytes())?;
    Ok(echo)
}

/// Runs `cfg` and writes `config.toml`, `summary.csv` and one
/// `rounds_run{r}.csv` per run into `cfg.out_dir`.
pub fn execute_run(cfg: &ExperimentConfig) -> Result<(Vec<SummaryRow>, RunArtifacts)> {
    let env = LoadedEnv::load(cfg)?;
    let results = run_experiment(cfg, &env)?;
    let config_echo = prepare_out_dir(cfg)?;
    let mut round_csvs = Vec::with_capacity(results.len());
    for r in &results {
        let path = round_csv_path(&cfg.out_dir, r.run);
        write_round_csv(&path, &r.output.logs)?;
        round_csvs.push(path);
    }
    let rows: Vec<SummaryRow> = results
        .iter()
        .map(|r| summary_row(cfg, r.run, &r.output.summary))
        .collect();
    let summary_csv = cfg.out_dir.join("summary.csv");
    write_summary_csv(&summary_csv, &rows)?;
    Ok((
        rows,
        RunArtifacts {
            round_csvs,
            summary_csv,
            config_echo,
        },
    ))
}

/// Copy of `cfg` with a fixed-entropy gate at `lambda` and expert quality `q`.
pub fn cell_config(cfg: &ExperimentConfig, lambda: f64, q: f64) -> ExperimentConfig {
    let mut cell = cfg.clone();
    cell.gate = GateConfig::FixedEntropy { lambda };
    cell.expert.quality = q;
    cell
}

/// Cross product of `lambdas` × `qs`, each cell run over all seeds. Returns
/// per-run rows in (λ, q, run) order and one aggregate per cell.
pub fn run_grid(
    cfg: &ExperimentConfig,
    lambdas: &[f64],
    qs: &[f64],
) -> Result<(Vec<SummaryRow>, Vec<GridRow>)> {
    if lambdas.is_empty() {
        return Err(HarnessError::config("lambdas", "sweep list is empty"));
    }
    if qs.is_empty() {
        return Err(HarnessError::config("qs", "sweep list is empty"));
    }
    let cells: Vec<ExperimentConfig> = lambdas
        .iter()
        .flat_map(|&l| qs.iter().map(move |&q| (l, q)))
        .map(|(l, q)| {
            let cell = cell_config(cfg, l, q);
            cell.validate().map(|_| cell)
        })
        .collect::<Result<_>>()?;
    let env = LoadedEnv::load(cfg)?;
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..cfg.runs).map(move |r| (c, r)))
        .collect();
    let summaries: Vec<RunSummary> = pool(cfg.threads)?.install(|| {
        jobs.par_iter()
            .map(|&(c, run)| {
                let out = run_once(env.as_ref(), &cells[c].run_spec(), run_seed(cfg.seed, run))?;
                Ok(out.summary)
            })
            .collect::<Result<_>>()
    })?;

    let mut rows = Vec::with_capacity(jobs.len());
    let mut grid = Vec::with_capacity(cells.len());
    for (cell, chunk) in cells.iter().zip(summaries.chunks(cfg.runs as usize)) {
        rows.extend(
            chunk
                .iter()
                .enumerate()
                .map(|(run, s)| summary_row(cell, run as u64, s)),
        );
        let agg = aggregate(chunk)?;
        grid.push(GridRow {
            env: cell.env.label(),
            agent: cell.agent.spec().name().to_string(),
            feedback_type: cell.feedback.as_str().to_string(),
            lambda: cell.gate.lambda().unwrap_or_default(),
            q: cell.expert.quality,
            runs: agg.runs,
            mean_regret: agg.cumulative_regret.mean,
            std_regret: agg.cumulative_regret.std,
            mean_feedback_fraction: agg.feedback_fraction.mean,
            mean_cum_reward: agg.cumulative_reward.mean,
            mean_cost_adjusted_reward: agg.cost_adjusted_reward.mean,
        });
    }
    Ok((rows, grid))
}

/// Runs a sweep and writes `config.toml`, `summary.csv` and `grid.csv`.
pub fn execute_sweep(
    cfg: &ExperimentConfig,
    lambdas: &[f64],
    qs: &[f64],
) -> Result<(Vec<SummaryRow>, Vec<GridRow>)> {
    let (rows, grid) = run_grid(cfg, lambdas, qs)?;
    prepare_out_dir(cfg)?;
    write_summary_csv(&cfg.out_dir.join("summary.csv"), &rows)?;
    write_grid_csv(&cfg.out_dir.join("grid.csv"), &grid)?;
    Ok((rows, grid))
}
