use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::episode::{run_episode, Outcome, RunRecord};
use crate::spec::ScenarioSpec;
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub stddev: f64,
}

impl Stats {
    /// Sample mean and (population) standard deviation; zeros for an empty slice.
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Self { mean, stddev: var.sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub scenario_hash: String,
    pub n_runs: usize,
    pub successes: usize,
    pub collisions: usize,
    pub timeouts: usize,
    pub no_paths: usize,
    pub success_rate: f64,
    pub travel_time: Stats,
    pub path_length: Stats,
    pub control_ms: Stats,
    pub fit_ms: Stats,
    pub seeds: Vec<u64>,
}

impl BatchSummary {
    /// Aggregates records in seed order. Travel, path and latency statistics use the
    /// successful runs only.
    pub fn from_records(records: &[RunRecord]) -> Self {
        let mut sorted: Vec<&RunRecord> = records.iter().collect();
        sorted.sort_by_key(|r| r.seed);
        let count = |o: Outcome| sorted.iter().filter(|r| r.outcome == o).count();
        let ok: Vec<&RunRecord> = sorted.iter().copied().filter(|r| r.outcome == Outcome::Success).collect();
        let travel: Vec<f64> = ok.iter().map(|r| r.travel_time).collect();
        let length: Vec<f64> = ok.iter().map(|r| r.path_length).collect();
        let control: Vec<f64> = ok
            .iter()
            .flat_map(|r| r.trajectory.iter().skip(1).map(|s| s.control_ms))
            .collect();
        let fit: Vec<f64> = ok.iter().flat_map(|r| r.fit_timings.iter().map(|f| f.fit_ms)).collect();
        let n_runs = sorted.len();
        let successes = ok.len();
        Self {
            scenario_hash: sorted.first().map(|r| r.scenario_hash.clone()).unwrap_or_default(),
            n_runs,
            successes,
            collisions: count(Outcome::Collision),
            timeouts: count(Outcome::Timeout),
            no_paths: count(Outcome::NoPath),
            success_rate: if n_runs == 0 { 0.0 } else { successes as f64 / n_runs as f64 },
            travel_time: Stats::of(&travel),
            path_length: Stats::of(&length),
            control_ms: Stats::of(&control),
            fit_ms: Stats::of(&fit),
            seeds: sorted.iter().map(|r| r.seed).collect(),
        }
    }
}

/// Runs every seed (in parallel) and returns the records sorted by seed.
pub fn run_records(spec: &ScenarioSpec, seeds: &[u64]) -> Result<Vec<RunRecord>, BenchError> {
    if seeds.is_empty() {
        return Err(BenchError::InvalidSpec("seed list is empty"));
    }
    let mut records = seeds
        .par_iter()
        .map(|&s| run_episode(spec, s))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by_key(|r| r.seed);
    Ok(records)
}

pub fn run_batch(spec: &ScenarioSpec, seeds: &[u64]) -> Result<BatchSummary, BenchError> {
    Ok(BatchSummary::from_records(&run_records(spec, seeds)?))
}
