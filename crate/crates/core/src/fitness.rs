//! Fitness functions scoring a coupling profile.
//!
//! `fit1` is the end-to-end transmission probability. `fit2` multiplies it
//! by `gamma + beta * exp(-S / N^2)` where `S = sum_i (J_i - J_{i-1})^2` is
//! the roughness of the profile and `gamma = 1 - beta`.

use serde::{Deserialize, Serialize};

use crate::dynamics::transfer::end_to_end_probability;
use crate::error::{Error, Result};
use crate::profile::{CouplingProfile, TransferTask};

pub const DEFAULT_BETA: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessKind {
    Fit1,
    Fit2,
}

impl std::str::FromStr for FitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fit1" => Ok(FitnessKind::Fit1),
            "fit2" => Ok(FitnessKind::Fit2),
            other => Err(Error::arg("fitness", format!("unknown fitness `{other}`, expected fit1 or fit2"))),
        }
    }
}

impl std::fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitnessKind::Fit1 => "fit1",
            FitnessKind::Fit2 => "fit2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessSpec {
    pub kind: FitnessKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

fn default_beta() -> f64 {
    DEFAULT_BETA
}

impl Default for FitnessSpec {
    fn default() -> Self {
        Self::fit1()
    }
}

impl FitnessSpec {
    pub fn fit1() -> Self {
        Self {
            kind: FitnessKind::Fit1,
            beta: DEFAULT_BETA,
        }
    }

    pub fn fit2(beta: f64) -> Result<Self> {
        let spec = Self {
            kind: FitnessKind::Fit2,
            beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gamma(&self) -> f64 {
        1.0 - self.beta
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::arg("beta", format!("must lie in [0, 1], got {}", self.beta)));
        }
        Ok(())
    }

    /// Fitness together with the transmission probability it was built from.
    pub fn score(&self, profile: &CouplingProfile, task: &TransferTask) -> Result<Score> {
        self.score_couplings(profile.couplings(), task.arrival_time())
    }

    pub(crate) fn score_couplings(&self, couplings: &[f64], t: f64) -> Result<Score> {
        let probability = end_to_end_probability(couplings, t)?;
        let fitness = match self.kind {
            FitnessKind::Fit1 => probability,
            FitnessKind::Fit2 => {
                probability * smoothness_factor(couplings, couplings.len() + 1, self.beta)
            }
        };
        Ok(Score {
            fitness,
            probability,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub fitness: f64,
    pub probability: f64,
}

/// `sum_{i=2}^{N-1} (J_i - J_{i-1})^2`.
pub fn roughness(couplings: &[f64]) -> f64 {
    couplings.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum()
}

/// `gamma + beta * exp(-roughness / N^2)`, in `[gamma, 1]`.
pub fn smoothness_factor(couplings: &[f64], n_sites: usize, beta: f64) -> f64 {
    let n2 = (n_sites * n_sites) as f64;
    (1.0 - beta) + beta * (-roughness(couplings) / n2).exp()
}

pub fn fit1(profile: &CouplingProfile, task: &TransferTask) -> Result<f64> {
    Ok(FitnessSpec::fit1().score(profile, task)?.fitness)
}

pub fn fit2(profile: &CouplingProfile, task: &TransferTask, spec: &FitnessSpec) -> Result<f64> {
    if spec.kind != FitnessKind::Fit2 {
        return Err(Error::arg("kind", "fit2 called with a fit1 spec"));
    }
    spec.validate()?;
    Ok(spec.score(profile, task)?.fitness)
}
