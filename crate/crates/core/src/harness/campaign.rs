//! Monte Carlo campaigns over independent protocol runs.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::adversary::TpStrategy;
use crate::engine::BackendKind;
use crate::error::{invalid, Result};
use crate::privacy::PaRatio;
use crate::protocol::{run_protocol, ProtocolConfig, ProtocolRun};
use crate::rng::trial_seed;

use super::stats::{binomial_sigma, mean_and_se};
use super::RunStats;

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub n: usize,
    pub trials: u64,
    pub strategy: TpStrategy,
    pub seed: u64,
    pub backend: BackendKind,
    pub pa_ratio: PaRatio,
    pub out: Option<PathBuf>,
}

impl CampaignConfig {
    pub fn new(n: usize, trials: u64, strategy: TpStrategy, seed: u64) -> Self {
        CampaignConfig {
            n,
            trials,
            strategy,
            seed,
            backend: BackendKind::Tableau,
            pa_ratio: PaRatio::HALF,
            out: None,
        }
    }

    fn protocol_config(&self, trial: u64) -> ProtocolConfig {
        ProtocolConfig {
            n: self.n,
            seed: trial_seed(self.seed, trial),
            backend: self.backend,
            pa_ratio: self.pa_ratio,
        }
    }
}

/// Runs every trial and maps each completed run through `f`. Results are in
/// trial order regardless of scheduling.
pub fn run_trials<T, F>(config: &CampaignConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, ProtocolRun) -> T + Sync,
{
    if config.trials == 0 {
        return Err(invalid("a campaign needs at least one trial"));
    }
    config.strategy.validate(config.n)?;
    (0..config.trials)
        .into_par_iter()
        .map(|trial| run_protocol(&config.protocol_config(trial), &config.strategy).map(|run| f(trial, run)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub strategy: String,
    pub trials: u64,
    pub aborted: u64,
    /// Aborted trials over all trials.
    pub detection_rate: f64,
    pub detection_sigma: f64,
    /// Mean raw key length over completed trials.
    pub mean_raw_key: f64,
    pub raw_key_se: f64,
    /// `mean_raw_key / 2n`.
    pub qubit_efficiency: f64,
    pub qubit_efficiency_se: f64,
    pub mean_final_key: f64,
    /// Completed trials whose raw keys differ, over completed trials.
    pub mismatch_rate: f64,
}

impl Summary {
    pub fn from_stats(stats: &[RunStats]) -> Self {
        let trials = stats.len() as u64;
        let n = stats.first().map_or(0, |s| s.n);
        let aborted = stats.iter().filter(|s| s.aborted()).count() as u64;
        let raw: Vec<f64> = stats.iter().filter_map(|s| s.raw_key_len).map(|l| l as f64).collect();
        let fin: Vec<f64> = stats.iter().filter_map(|s| s.final_key_len).map(|l| l as f64).collect();
        let (mean_raw_key, raw_key_se) = mean_and_se(&raw);
        let completed = raw.len();
        let mismatched = stats.iter().filter(|s| s.keys_match == Some(false)).count();
        let detection_rate = aborted as f64 / trials as f64;
        let qubits = 2.0 * n as f64;
        Summary {
            n,
            strategy: stats.first().map(|s| s.strategy.clone()).unwrap_or_default(),
            trials,
            aborted,
            detection_rate,
            detection_sigma: binomial_sigma(detection_rate, trials),
            mean_raw_key,
            raw_key_se,
            qubit_efficiency: mean_raw_key / qubits,
            qubit_efficiency_se: raw_key_se / qubits,
            mean_final_key: mean_and_se(&fin).0,
            mismatch_rate: if completed == 0 { f64::NAN } else { mismatched as f64 / completed as f64 },
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "strategy        {}", self.strategy)?;
        writeln!(f, "n               {}", self.n)?;
        writeln!(f, "trials          {}", self.trials)?;
        writeln!(f, "aborted         {}", self.aborted)?;
        writeln!(f, "detection rate  {:.6} ± {:.6}", self.detection_rate, self.detection_sigma)?;
        writeln!(f, "mean raw key    {:.4} ± {:.4}", self.mean_raw_key, self.raw_key_se)?;
        writeln!(f, "qubit eff.      {:.6} ± {:.6}", self.qubit_efficiency, self.qubit_efficiency_se)?;
        writeln!(f, "mean final key  {:.4}", self.mean_final_key)?;
        write!(f, "key mismatch    {:.6}", self.mismatch_rate)
    }
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub stats: Vec<RunStats>,
    pub summary: Summary,
}

/// Runs a campaign and, if `config.out` is set, writes its CSV.
pub fn run_campaign(config: &CampaignConfig) -> Result<Campaign> {
    let stats = run_trials(config, |trial, run| {
        let mut s = run.stats;
        s.trial = trial;
        s
    })?;
    if let Some(path) = &config.out {
        super::csv_out::emit_csv(&stats, path)?;
    }
    let summary = Summary::from_stats(&stats);
    Ok(Campaign { stats, summary })
}
