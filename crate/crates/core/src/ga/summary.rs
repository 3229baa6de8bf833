use serde::{Deserialize, Serialize};

use super::engine::RunRecord;
use crate::error::{Error, Result};

/// Statistics over independent runs at one chain length.
///
/// `p_max` is the best transmission probability over all runs, `p_avg` the
/// mean of the per-run bests (with population standard deviation
/// `p_avg_std`), and `p_min` the smallest probability found in any run's
/// final population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub n_sites: usize,
    pub n_runs: usize,
    pub p_max: f64,
    pub p_avg: f64,
    pub p_avg_std: f64,
    pub p_min: f64,
    /// Generation at which the run attaining `p_max` reached its best.
    pub gen_of_p_max: usize,
    pub per_run_maxima: Vec<f64>,
}

pub fn summarize_runs(records: &[RunRecord]) -> Result<ExperimentSummary> {
    let first = records
        .first()
        .ok_or_else(|| Error::arg("records", "cannot summarize zero runs"))?;
    let maxima: Vec<f64> = records.iter().map(|r| r.best_probability).collect();
    let n = maxima.len() as f64;
    let mean = maxima.iter().sum::<f64>() / n;
    let var = maxima.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n;
    let (best_run, p_max) = maxima
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p > acc.1 { (i, p) } else { acc });
    let p_min = records
        .iter()
        .map(|r| r.final_population_min_probability)
        .fold(f64::INFINITY, f64::min);
    Ok(ExperimentSummary {
        n_sites: first.n_sites,
        n_runs: records.len(),
        p_max,
        p_avg: mean,
        p_avg_std: var.sqrt(),
        p_min,
        gen_of_p_max: records[best_run].best_generation,
        per_run_maxima: maxima,
    })
}
