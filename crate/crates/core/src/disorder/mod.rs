//! Robustness of designed chains under static coupling disorder
//! `J_i -> J_i (1 + xi_i)`, `xi_i ~ N(0, sigma^2)` independently per bond.

mod fit;
mod simplex;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fit::{fit_decay_curve, DecayFit, MAX_ACCEPTABLE_RESIDUAL};
pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};

use crate::dynamics::transfer::end_to_end_probability;
use crate::error::{Error, Result};
use crate::profile::{CouplingProfile, TransferTask};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderConfig {
    pub sigma: f64,
    pub n_realizations: usize,
    pub rng_seed: u64,
}

impl DisorderConfig {
    pub const DEFAULT_REALIZATIONS: usize = 1000;

    pub fn new(sigma: f64, n_realizations: usize, rng_seed: u64) -> Result<Self> {
        let cfg = Self {
            sigma,
            n_realizations,
            rng_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_sigma(self.sigma)?;
        if self.n_realizations == 0 {
            return Err(Error::arg("n_realizations", "need at least one realization"));
        }
        Ok(())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::arg("sigma", format!("disorder strength must be >= 0, got {sigma}")));
    }
    Ok(())
}

/// One disorder realization. Every bond is perturbed; the result is in
/// general no longer centrosymmetric and, for large `sigma`, may contain
/// negative couplings.
pub fn perturb_profile<R: Rng + ?Sized>(profile: &CouplingProfile, sigma: f64, rng: &mut R) -> Result<CouplingProfile> {
    check_sigma(sigma)?;
    CouplingProfile::new_signed(profile.n_sites(), perturb_couplings(profile.couplings(), sigma, rng))
}

fn perturb_couplings<R: Rng + ?Sized>(couplings: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return couplings.to_vec();
    }
    let normal = Normal::new(0.0, sigma).expect("sigma checked finite and non-negative");
    couplings
        .iter()
        .map(|j| j * (1.0 + normal.sample(rng)))
        .collect()
}

fn sample_probabilities(
    profile: &CouplingProfile,
    task: &TransferTask,
    sigma: f64,
    n_realizations: usize,
    seed: u64,
    sigma_index: usize,
) -> Result<Vec<f64>> {
    (0..n_realizations)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, &[sigma_index as u64, k as u64]);
            let couplings = perturb_couplings(profile.couplings(), sigma, &mut rng);
            end_to_end_probability(&couplings, task.arrival_time())
        })
        .collect()
}

/// Mean and population standard deviation (divisor `n`).
fn mean_std(samples: &[f64]) -> (f64, f64) {
    if samples.windows(2).all(|w| w[0] == w[1]) {
        return (samples[0], 0.0);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|p| (mean - p).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Disorder-averaged transmission probability and its spread.
pub fn mean_transmission(profile: &CouplingProfile, task: &TransferTask, cfg: &DisorderConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let samples = sample_probabilities(profile, task, cfg.sigma, cfg.n_realizations, cfg.rng_seed, 0)?;
    Ok(mean_std(&samples))
}

/// `<P>` and `sigma_P` along a grid of disorder strengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderCurve {
    pub n_sites: usize,
    pub n_realizations: usize,
    pub sigmas: Vec<f64>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl DisorderCurve {
    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// Monte Carlo standard error of the mean at grid point `i`.
    pub fn standard_error(&self, i: usize) -> f64 {
        self.stds[i] / (self.n_realizations as f64).sqrt()
    }
}

/// Independent realizations at each grid point; the stream of realization
/// `k` at grid index `s` is derived from `(seed, s, k)`. The `sigma` field of
/// `cfg` is ignored.
pub fn disorder_sweep(
    profile: &CouplingProfile,
    task: &TransferTask,
    sigma_grid: &[f64],
    cfg: &DisorderConfig,
) -> Result<DisorderCurve> {
    if sigma_grid.is_empty() {
        return Err(Error::arg("sigma_grid", "need at least one disorder strength"));
    }
    if cfg.n_realizations == 0 {
        return Err(Error::arg("n_realizations", "need at least one realization"));
    }
    let mut means = Vec::with_capacity(sigma_grid.len());
    let mut stds = Vec::with_capacity(sigma_grid.len());
    for (s, &sigma) in sigma_grid.iter().enumerate() {
        check_sigma(sigma)?;
        let samples = sample_probabilities(profile, task, sigma, cfg.n_realizations, cfg.rng_seed, s)?;
        let (m, sd) = mean_std(&samples);
        means.push(m);
        stds.push(sd);
    }
    Ok(DisorderCurve {
        n_sites: profile.n_sites(),
        n_realizations: cfg.n_realizations,
        sigmas: sigma_grid.to_vec(),
        means,
        stds,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::dynamics::transmission_probability;

    fn chain() -> CouplingProfile {
        CouplingProfile::new(6, vec![1.0, 1.4, 1.6, 1.4, 1.0]).unwrap()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let p = chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(perturb_profile(&p, 0.0, &mut rng).unwrap(), p);
    }

    #[test]
    fn noise_moments() {
        let sigma = 0.2;
        let p = CouplingProfile::new(2, vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let xi: Vec<f64> = (0..n)
            .map(|_| perturb_profile(&p, sigma, &mut rng).unwrap().couplings()[0] - 1.0)
            .collect();
        let (mean, sd) = mean_std(&xi);
        assert!(mean.abs() < 4.0 * sigma / (n as f64).sqrt(), "{mean}");
        assert!((sd - sigma).abs() < 0.02 * sigma, "{sd}");
    }

    #[test]
    fn all_bonds_move_and_symmetry_breaks() {
        let p = chain();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = perturb_profile(&p, 0.1, &mut rng).unwrap();
        assert!(q.couplings().iter().zip(p.couplings()).all(|(a, b)| a != b));
        assert!(!q.is_centrosymmetric());
    }

    #[test]
    fn zero_disorder_mean_is_clean_probability() {
        let p = chain();
        let task = TransferTask::new(12.0).unwrap();
        let (m, sd) = mean_transmission(&p, &task, &DisorderConfig::new(0.0, 50, 1).unwrap()).unwrap();
        assert_eq!(m, transmission_probability(&p, &task).unwrap());
        assert_eq!(sd, 0.0);
    }

    #[test]
    fn sweep_is_deterministic() {
        let p = chain();
        let task = TransferTask::new(12.0).unwrap();
        let cfg = DisorderConfig::new(0.0, 64, 9).unwrap();
        let a = disorder_sweep(&p, &task, &[0.0, 0.1, 0.3], &cfg).unwrap();
        let b = disorder_sweep(&p, &task, &[0.0, 0.1, 0.3], &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.means.iter().all(|m| (0.0..=1.0).contains(m)));
        assert!(a.stds.iter().all(|s| (0.0..=0.5).contains(s)));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(DisorderConfig::new(-0.1, 10, 0).is_err());
        assert!(DisorderConfig::new(0.1, 0, 0).is_err());
        let cfg = DisorderConfig::new(0.1, 10, 0).unwrap();
        let task = TransferTask::new(1.0).unwrap();
        assert!(disorder_sweep(&chain(), &task, &[], &cfg).is_err());
    }
}
