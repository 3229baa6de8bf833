//! Spectral diagnostics of designed chains.
//!
//! * Consecutive gap ratios `r_n = min(s_n, s_{n-1}) / max(s_n, s_{n-1})`
//!   pooled over excitation sectors and histogrammed against the Poisson
//!   law `p(r) = 2 / (1 + r)^2`, whose mean is `2 ln 2 - 1`.
//! * The constructive-interference report: how close successive one-excitation
//!   gaps are to odd multiples of `pi / T`, together with each level's
//!   weight on the first site and its mirror residual `||v(1)| - |v(N)||`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{binomial, build_k_excitation_block, build_one_excitation_block, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::profile::{CouplingProfile, TransferTask};

pub const HISTOGRAM_BINS: usize = 200;
pub const DEFAULT_ACTIVE_WEIGHT: f64 = 0.01;
const DEGENERACY_GUARD: f64 = 1e-12;

/// Mean of the Poisson gap-ratio density on `[0, 1]`.
pub fn poisson_mean_ratio() -> f64 {
    2.0 * std::f64::consts::LN_2 - 1.0
}

/// `p(r) = 2 / (1 + r)^2` on `[0, 1]`.
pub fn poisson_ratio_pdf(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::arg("r", format!("gap ratio {r} outside [0, 1]")));
    }
    Ok(2.0 / (1.0 + r).powi(2))
}

/// Ratios of consecutive spacings of an ascending spectrum. Pairs whose
/// larger spacing is below `1e-12` of the spectral width are skipped.
pub fn gap_ratios(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    if eigenvalues.len() < 3 {
        return Err(Error::arg(
            "eigenvalues",
            format!("need at least 3 levels, got {}", eigenvalues.len()),
        ));
    }
    if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::arg("eigenvalues", "levels must be ascending"));
    }
    let width = eigenvalues[eigenvalues.len() - 1] - eigenvalues[0];
    let floor = DEGENERACY_GUARD * width;
    let spacings: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(spacings
        .windows(2)
        .filter_map(|s| {
            let (lo, hi) = if s[0] <= s[1] { (s[0], s[1]) } else { (s[1], s[0]) };
            (hi > floor && hi > 0.0).then(|| lo / hi)
        })
        .collect())
}

/// Count-normalized histogram of gap ratios on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRatioHistogram {
    pub masses: Vec<f64>,
    pub n_ratios: usize,
}

impl GapRatioHistogram {
    pub fn from_ratios(ratios: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::arg("bins", "need at least one bin"));
        }
        if ratios.is_empty() {
            return Err(Error::arg("ratios", "no gap ratios to histogram"));
        }
        let mut counts = vec![0usize; bins];
        for &r in ratios {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::arg("ratios", format!("gap ratio {r} outside [0, 1]")));
            }
            let b = ((r * bins as f64) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let total = ratios.len() as f64;
        Ok(Self {
            masses: counts.iter().map(|&c| c as f64 / total).collect(),
            n_ratios: ratios.len(),
        })
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn bin_width(&self) -> f64 {
        1.0 / self.bins() as f64
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (i as f64 * w, (i + 1) as f64 * w)
    }

    /// Poisson mass expected in bin `i`: `p(center) * width`.
    pub fn poisson_reference_mass(&self, i: usize) -> f64 {
        let (l, r) = self.bin_edges(i);
        2.0 / (1.0 + 0.5 * (l + r)).powi(2) * self.bin_width()
    }

    /// Pearson-style distance `sum (m - q)^2 / q` to the Poisson reference.
    pub fn chi_square_to_poisson(&self) -> f64 {
        (0..self.bins())
            .map(|i| {
                let q = self.poisson_reference_mass(i);
                (self.masses[i] - q).powi(2) / q
            })
            .sum()
    }
}

/// How levels from different excitation sectors are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    /// Ratios within each sector, then concatenated (ascending `k`).
    #[default]
    WithinSector,
    /// All sector levels merged into one spectrum before taking ratios.
    AcrossSectors,
}

/// Gap ratios from the sectors `k = 1..=k_max`, refusing sectors larger than `cap`.
pub fn sector_gap_ratios(profile: &CouplingProfile, k_max: usize, pooling: Pooling, cap: usize) -> Result<Vec<f64>> {
    let n = profile.n_sites();
    if k_max == 0 || k_max > n {
        return Err(Error::arg("k_max", format!("must lie in 1..={n}")));
    }
    for k in 1..=k_max {
        let dim = binomial(n, k);
        if dim > cap as u128 {
            return Err(Error::SectorTooLarge {
                n_sites: n,
                k,
                dim,
                cap,
            });
        }
    }
    let spectra = (1..=k_max)
        .map(|k| {
            let block = build_k_excitation_block(profile, k, cap)?;
            Ok(block.eigendecompose()?.eigenvalues().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;

    match pooling {
        Pooling::WithinSector => {
            let mut out = Vec::new();
            for levels in spectra.iter().filter(|l| l.len() >= 3) {
                out.extend(gap_ratios(levels)?);
            }
            Ok(out)
        }
        Pooling::AcrossSectors => {
            let mut all: Vec<f64> = spectra.into_iter().flatten().collect();
            all.sort_by(f64::total_cmp);
            gap_ratios(&all)
        }
    }
}

pub fn sector_gap_ratio_histogram(profile: &CouplingProfile, k_max: usize, pooling: Pooling, cap: usize) -> Result<GapRatioHistogram> {
    let ratios = sector_gap_ratios(profile, k_max, pooling, cap)?;
    GapRatioHistogram::from_ratios(&ratios, HISTOGRAM_BINS)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KayLevel {
    pub index: usize,
    pub energy: f64,
    /// `E_{i+1} - E_i`; absent for the top level.
    pub gap: Option<f64>,
    /// `gap / (pi / T)`.
    pub gap_ratio: Option<f64>,
    pub nearest_odd: Option<i64>,
    pub odd_residual: Option<f64>,
    /// `|<v_i|1>|^2`.
    pub weight: f64,
    pub mirror_residual: f64,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KayReport {
    pub arrival_time: f64,
    pub alpha: f64,
    pub active_threshold: f64,
    pub levels: Vec<KayLevel>,
}

/// Closest positive odd integer.
pub fn nearest_odd(x: f64) -> i64 {
    let q = 2.0 * ((x - 1.0) / 2.0).round() + 1.0;
    (q as i64).max(1)
}

impl KayReport {
    /// Builds the report from an ascending spectrum with per-level weights
    /// and mirror residuals.
    pub fn from_levels(
        eigenvalues: &[f64],
        weights: &[f64],
        mirror_residuals: &[f64],
        arrival_time: f64,
        active_threshold: f64,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if weights.len() != n || mirror_residuals.len() != n {
            return Err(Error::arg("levels", "eigenvalues, weights and residuals must align"));
        }
        if !(arrival_time.is_finite() && arrival_time > 0.0) {
            return Err(Error::arg("arrival_time", "must be positive"));
        }
        let alpha = PI / arrival_time;
        let levels = (0..n)
            .map(|i| {
                let gap = (i + 1 < n).then(|| eigenvalues[i + 1] - eigenvalues[i]);
                let gap_ratio = gap.map(|g| g / alpha);
                let nearest = gap_ratio.map(nearest_odd);
                let residual = gap_ratio.zip(nearest).map(|(x, q)| (x - q as f64).abs());
                KayLevel {
                    index: i,
                    energy: eigenvalues[i],
                    gap,
                    gap_ratio,
                    nearest_odd: nearest,
                    odd_residual: residual,
                    weight: weights[i],
                    mirror_residual: mirror_residuals[i],
                    active: weights[i] > active_threshold,
                }
            })
            .collect();
        Ok(Self {
            arrival_time,
            alpha,
            active_threshold,
            levels,
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.levels.iter().map(|l| l.weight).sum()
    }

    pub fn active_weight(&self) -> f64 {
        self.levels.iter().filter(|l| l.active).map(|l| l.weight).sum()
    }

    pub fn active_indices(&self) -> Vec<usize> {
        self.levels.iter().filter(|l| l.active).map(|l| l.index).collect()
    }

    /// Gaps between successive active levels in units of `pi / T`, with
    /// their distance to the nearest odd integer.
    pub fn active_gap_residuals(&self) -> Vec<(f64, i64, f64)> {
        let active: Vec<&KayLevel> = self.levels.iter().filter(|l| l.active).collect();
        active
            .windows(2)
            .map(|w| {
                let x = (w[1].energy - w[0].energy) / self.alpha;
                let q = nearest_odd(x);
                (x, q, (x - q as f64).abs())
            })
            .collect()
    }
}

/// Constructive-interference report of the one-excitation spectrum.
pub fn kay_report(profile: &CouplingProfile, task: &TransferTask) -> Result<KayReport> {
    kay_report_with_threshold(profile, task, DEFAULT_ACTIVE_WEIGHT)
}

pub fn kay_report_with_threshold(profile: &CouplingProfile, task: &TransferTask, threshold: f64) -> Result<KayReport> {
    let sd = build_one_excitation_block(profile)?.eigendecompose()?;
    KayReport::from_levels(
        sd.eigenvalues(),
        &sd.weights(),
        &mirror_residuals(&sd),
        task.arrival_time(),
        threshold,
    )
}

/// `||v_i(1)| - |v_i(N)||` for every eigenvector.
pub fn mirror_residuals(sd: &SpectralDecomposition) -> Vec<f64> {
    let n = sd.dim();
    (0..n)
        .map(|i| {
            let v = sd.eigenvector(i);
            (v[0].abs() - v[n - 1].abs()).abs()
        })
        .collect()
}
