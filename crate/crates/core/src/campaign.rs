//! End-to-end experiments and their on-disk artifacts.
//!
//! Every CSV file starts with `#`-prefixed metadata lines (tool version,
//! seed, config hash) followed by a header row; floats carry 17 significant
//! digits. JSON artifacts embed the same metadata under `"meta"`. Apart from
//! `timings.csv`, all outputs are byte-identical when a command is replayed
//! with the same seed, whatever the worker count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::disorder::{disorder_sweep, fit_decay_curve, DecayFit, DisorderConfig, DisorderCurve};
use crate::dynamics::{transmission_probability, DEFAULT_SECTOR_CAP};
use crate::error::{Error, Result};
use crate::fitness::FitnessSpec;
use crate::ga::{run_ga, summarize_runs, ChainObjective, ExperimentSummary, GaHyperparameters, RunRecord};
use crate::profile::{CouplingProfile, TransferTask};
use crate::rng::derive_seed;
use crate::spectral::{
    kay_report_with_threshold, mean, sector_gap_ratios, GapRatioHistogram, KayReport, Pooling, DEFAULT_ACTIVE_WEIGHT,
    HISTOGRAM_BINS,
};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_ARRIVAL_MULTIPLE: f64 = 2.0;

fn default_arrival_multiple() -> f64 {
    DEFAULT_ARRIVAL_MULTIPLE
}

fn default_runs() -> usize {
    50
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn config_hash<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    let digest = Sha256::digest(&bytes);
    Ok(hex::encode(&digest[..8]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config_hash: String,
}

impl OutputMeta {
    fn csv_header(&self) -> String {
        format!(
            "# tool={} version={}\n# command={} seed={} config_hash={}\n",
            self.tool, self.version, self.command, self.seed, self.config_hash
        )
    }

    fn json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, &text)
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None | Some(0) => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::arg("workers", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

// ---------------------------------------------------------------------------
// design

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub chain_lengths: Vec<usize>,
    #[serde(default)]
    pub fitness: FitnessSpec,
    #[serde(default)]
    pub hyperparameters: GaHyperparameters,
    #[serde(default = "default_runs")]
    pub n_runs: usize,
    /// `T = arrival_multiple * N`.
    #[serde(default = "default_arrival_multiple")]
    pub arrival_multiple: f64,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub master_seed: u64,
    /// Thread count; absent means all cores. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl CampaignConfig {
    pub fn new(chain_lengths: Vec<usize>, fitness: FitnessSpec) -> Self {
        Self {
            chain_lengths,
            fitness,
            hyperparameters: GaHyperparameters::default(),
            n_runs: default_runs(),
            arrival_multiple: DEFAULT_ARRIVAL_MULTIPLE,
            output_dir: default_out(),
            master_seed: 0,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chain_lengths.is_empty() {
            return Err(Error::arg("chain_lengths", "need at least one chain length"));
        }
        if let Some(&n) = self.chain_lengths.iter().find(|&&n| n < 2) {
            return Err(Error::arg("chain_lengths", format!("chain length {n} is below 2")));
        }
        if self.n_runs == 0 {
            return Err(Error::arg("n_runs", "need at least one run"));
        }
        if !(self.arrival_multiple.is_finite() && self.arrival_multiple > 0.0) {
            return Err(Error::arg("arrival_multiple", "must be positive"));
        }
        self.fitness.validate()?;
        for &n in &self.chain_lengths {
            self.hyperparameters.validate(n)?;
        }
        Ok(())
    }

    /// Seed of run `run` at chain length `n`.
    pub fn run_seed(&self, n: usize, run: usize) -> u64 {
        derive_seed(self.master_seed, &[n as u64, run as u64])
    }

    /// Hash of everything that influences results (excludes output path
    /// and worker count).
    pub fn hash(&self) -> Result<String> {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        c.workers = None;
        config_hash(&c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Runs for one chain length with their wall times in seconds.
#[derive(Debug, Clone)]
pub struct LengthResult {
    pub n_sites: usize,
    pub records: Vec<RunRecord>,
    pub summary: ExperimentSummary,
    pub wall_times: Vec<f64>,
}

impl LengthResult {
    /// Profile of the run with the highest transmission probability.
    pub fn best_record(&self) -> &RunRecord {
        self.records
            .iter()
            .fold(&self.records[0], |best, r| if r.best_probability > best.best_probability { r } else { best })
    }

    pub fn mean_wall_time(&self) -> f64 {
        mean(&self.wall_times)
    }
}

/// Runs every GA run of the campaign in memory.
pub fn run_campaign(config: &CampaignConfig) -> Result<Vec<LengthResult>> {
    config.validate()?;
    with_workers(config.workers, || {
        config
            .chain_lengths
            .iter()
            .map(|&n| {
                let task = TransferTask::multiple_of_length(n, config.arrival_multiple)?;
                let objective = ChainObjective::new(n, task, config.fitness)?;
                let runs: Vec<(RunRecord, f64)> = (0..config.n_runs)
                    .into_par_iter()
                    .map(|r| {
                        let start = Instant::now();
                        let rec = run_ga(&config.hyperparameters, &objective, config.run_seed(n, r))?;
                        Ok((rec, start.elapsed().as_secs_f64()))
                    })
                    .collect::<Result<_>>()?;
                let (records, wall_times): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
                let summary = summarize_runs(&records)?;
                Ok(LengthResult {
                    n_sites: n,
                    records,
                    summary,
                    wall_times,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

/// Runs the campaign and writes `summary.csv`, `traces/n{N}_run{r}.csv`,
/// `runs_n{N}.json`, `best_profile_n{N}.json` and `timings.csv` under the
/// configured output directory.
pub fn cmd_design(config: &CampaignConfig) -> Result<Vec<LengthResult>> {
    config.validate()?;
    let out = &config.output_dir;
    ensure_dir(&out.join("traces"))?;
    let meta = OutputMeta {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: "design",
        seed: config.master_seed,
        config_hash: config.hash()?,
    };

    let results = run_campaign(config)?;

    let mut summary = meta.csv_header();
    summary.push_str("n,p_max,p_avg,p_avg_std,p_min,gen_of_p_max\n");
    let mut timings = meta.csv_header();
    timings.push_str("n,run,seconds,generations\n");
    for res in &results {
        let s = &res.summary;
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{}",
            s.n_sites,
            fmt_f64(s.p_max),
            fmt_f64(s.p_avg),
            fmt_f64(s.p_avg_std),
            fmt_f64(s.p_min),
            s.gen_of_p_max
        );
        for (r, (rec, secs)) in res.records.iter().zip(&res.wall_times).enumerate() {
            let _ = writeln!(timings, "{},{r},{secs:.6},{}", res.n_sites, rec.generations);
            let mut trace = meta.csv_header();
            let _ = writeln!(trace, "# n={} run={r} run_seed={}", res.n_sites, rec.rng_seed);
            trace.push_str("generation,best_fitness\n");
            for (g, f) in rec.trace_csv_rows() {
                let _ = writeln!(trace, "{g},{}", fmt_f64(f));
            }
            write_file(&out.join("traces").join(format!("n{}_run{r:03}.csv", res.n_sites)), &trace)?;
        }
        write_json(
            &out.join(format!("runs_n{}.json", res.n_sites)),
            &json!({ "meta": meta.json(), "summary": s, "records": res.records }),
        )?;
        let best = res
            .best_record()
            .best_profile
            .clone()
            .with_meta("config_hash", meta.config_hash.clone())
            .with_meta("tool_version", TOOL_VERSION);
        best.save(out.join(format!("best_profile_n{}.json", res.n_sites)))?;
    }
    write_file(&out.join("summary.csv"), &summary)?;
    write_file(&out.join("timings.csv"), &timings)?;
    Ok(results)
}

// ---------------------------------------------------------------------------
// disorder

fn default_sigmas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 * 0.05).collect()
}

fn default_realizations() -> usize {
    DisorderConfig::DEFAULT_REALIZATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderCommandConfig {
    pub profile: PathBuf,
    #[serde(default = "default_sigmas")]
    pub sigmas: Vec<f64>,
    #[serde(default = "default_realizations")]
    pub n_realizations: usize,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default = "default_arrival_multiple")]
    pub arrival_multiple: f64,
    /// Overrides `arrival_multiple * N` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival_time: Option<f64>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl DisorderCommandConfig {
    pub fn new(profile: impl Into<PathBuf>) -> Self {
        Self {
            profile: profile.into(),
            sigmas: default_sigmas(),
            n_realizations: default_realizations(),
            rng_seed: 0,
            arrival_multiple: DEFAULT_ARRIVAL_MULTIPLE,
            arrival_time: None,
            output_dir: default_out(),
            workers: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn resolve_task(n_sites: usize, multiple: f64, time: Option<f64>) -> Result<TransferTask> {
    match time {
        Some(t) => TransferTask::new(t),
        None => TransferTask::multiple_of_length(n_sites, multiple),
    }
}

#[derive(Debug, Clone)]
pub struct DisorderOutcome {
    pub design_probability: f64,
    pub curve: DisorderCurve,
    /// Absent when the grid is too short to fit.
    pub fit: Option<DecayFit>,
}

impl DisorderOutcome {
    pub fn fit_rejected(&self) -> bool {
        self.fit.is_some_and(|f| !f.is_acceptable())
    }
}

/// Writes `disorder_curve.csv` and, for grids of six or more points,
/// `decay_fit.json`. A minimizer failure is returned as an error after the
/// curve has been written.
pub fn cmd_disorder(config: &DisorderCommandConfig) -> Result<DisorderOutcome> {
    let profile = CouplingProfile::load(&config.profile)?;
    let task = resolve_task(profile.n_sites(), config.arrival_multiple, config.arrival_time)?;
    let mc = DisorderConfig::new(0.0, config.n_realizations, config.rng_seed)?;
    ensure_dir(&config.output_dir)?;
    let meta = OutputMeta {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: "disorder",
        seed: config.rng_seed,
        config_hash: config_hash(&json!({
            "profile": profile,
            "sigmas": config.sigmas,
            "n_realizations": config.n_realizations,
            "rng_seed": config.rng_seed,
            "arrival_time": task.arrival_time(),
        }))?,
    };

    let (design_probability, curve) = with_workers(config.workers, || -> Result<_> {
        Ok((
            transmission_probability(&profile, &task)?,
            disorder_sweep(&profile, &task, &config.sigmas, &mc)?,
        ))
    })??;

    let mut csv = meta.csv_header();
    let _ = writeln!(
        csv,
        "# n={} arrival_time={} n_realizations={}",
        profile.n_sites(),
        fmt_f64(task.arrival_time()),
        config.n_realizations
    );
    csv.push_str("sigma,mean,std\n");
    for i in 0..curve.len() {
        let _ = writeln!(
            csv,
            "{},{},{}",
            fmt_f64(curve.sigmas[i]),
            fmt_f64(curve.means[i]),
            fmt_f64(curve.stds[i])
        );
    }
    write_file(&config.output_dir.join("disorder_curve.csv"), &csv)?;

    let fit = if curve.len() >= 6 {
        let fit = fit_decay_curve(&curve)?;
        write_json(
            &config.output_dir.join("decay_fit.json"),
            &json!({
                "meta": meta.json(),
                "a": fit.a,
                "b": fit.b,
                "c": fit.c,
                "d": fit.d,
                "residual_norm": fit.residual_norm,
                "identifiable": fit.identifiable,
                "accepted": fit.is_acceptable(),
            }),
        )?;
        Some(fit)
    } else {
        None
    };
    Ok(DisorderOutcome {
        design_probability,
        curve,
        fit,
    })
}

// ---------------------------------------------------------------------------
// spectra

fn default_k_max() -> usize {
    1
}

fn default_cap() -> usize {
    DEFAULT_SECTOR_CAP
}

fn default_threshold() -> f64 {
    DEFAULT_ACTIVE_WEIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraCommandConfig {
    pub profile: PathBuf,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub pooling: Pooling,
    #[serde(default = "default_cap")]
    pub sector_cap: usize,
    #[serde(default = "default_arrival_multiple")]
    pub arrival_multiple: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival_time: Option<f64>,
    #[serde(default = "default_threshold")]
    pub active_threshold: f64,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
}

impl SpectraCommandConfig {
    pub fn new(profile: impl Into<PathBuf>) -> Self {
        Self {
            profile: profile.into(),
            k_max: default_k_max(),
            pooling: Pooling::default(),
            sector_cap: default_cap(),
            arrival_multiple: DEFAULT_ARRIVAL_MULTIPLE,
            arrival_time: None,
            active_threshold: DEFAULT_ACTIVE_WEIGHT,
            output_dir: default_out(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone)]
pub struct SpectraOutcome {
    pub ratios: Vec<f64>,
    pub histogram: GapRatioHistogram,
    pub kay: KayReport,
}

impl SpectraOutcome {
    pub fn mean_ratio(&self) -> f64 {
        mean(&self.ratios)
    }
}

/// Writes `gap_ratio_histogram.csv` and `kay_report.json`.
pub fn cmd_spectra(config: &SpectraCommandConfig) -> Result<SpectraOutcome> {
    let profile = CouplingProfile::load(&config.profile)?;
    let task = resolve_task(profile.n_sites(), config.arrival_multiple, config.arrival_time)?;
    let ratios = sector_gap_ratios(&profile, config.k_max, config.pooling, config.sector_cap)?;
    let histogram = GapRatioHistogram::from_ratios(&ratios, HISTOGRAM_BINS)?;
    let kay = kay_report_with_threshold(&profile, &task, config.active_threshold)?;

    ensure_dir(&config.output_dir)?;
    let meta = OutputMeta {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: "spectra",
        seed: 0,
        config_hash: config_hash(&json!({
            "profile": profile,
            "k_max": config.k_max,
            "pooling": config.pooling,
            "arrival_time": task.arrival_time(),
            "active_threshold": config.active_threshold,
        }))?,
    };

    let mut csv = meta.csv_header();
    let _ = writeln!(
        csv,
        "# n={} k_max={} n_ratios={} mean_ratio={}",
        profile.n_sites(),
        config.k_max,
        histogram.n_ratios,
        fmt_f64(mean(&ratios))
    );
    csv.push_str("bin_left,bin_right,mass,poisson_reference_mass\n");
    for i in 0..histogram.bins() {
        let (l, r) = histogram.bin_edges(i);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_f64(l),
            fmt_f64(r),
            fmt_f64(histogram.masses[i]),
            fmt_f64(histogram.poisson_reference_mass(i))
        );
    }
    write_file(&config.output_dir.join("gap_ratio_histogram.csv"), &csv)?;
    write_json(
        &config.output_dir.join("kay_report.json"),
        &json!({
            "meta": meta.json(),
            "arrival_time": kay.arrival_time,
            "alpha": kay.alpha,
            "active_threshold": kay.active_threshold,
            "active_weight": kay.active_weight(),
            "levels": kay.levels,
        }),
    )?;
    Ok(SpectraOutcome {
        ratios,
        histogram,
        kay,
    })
}
