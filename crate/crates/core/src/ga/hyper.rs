use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionType {
    /// Steady-state selection: the fittest individuals mate, the worst are replaced.
    #[serde(rename = "sss")]
    SteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossoverType {
    Uniform,
}

/// GA configuration. Defaults reproduce the reference campaign settings
/// (population 1000, 200 parents, elitism 100, genes in `[0, N]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaHyperparameters {
    pub max_generations: usize,
    pub population_size: usize,
    pub gene_min: f64,
    /// Absolute upper gene bound. When absent the bound is `gene_max_per_site * N`.
    pub gene_max: Option<f64>,
    pub gene_max_per_site: f64,
    pub saturation_generations: usize,
    pub num_parents: usize,
    pub selection: SelectionType,
    pub elitism_count: usize,
    pub crossover: CrossoverType,
    pub crossover_probability: f64,
    /// Per-gene mutation probability.
    pub mutation_probability: f64,
    pub strong_zeta: f64,
    pub strong_zeta_first_gene: f64,
    pub weak_zeta: f64,
    pub convergence_window: usize,
    pub convergence_threshold: f64,
    /// Stop once the best fitness exceeds `1 - tolerance`.
    pub tolerance: f64,
    pub rng_seed: u64,
}

impl Default for GaHyperparameters {
    fn default() -> Self {
        Self {
            max_generations: 2000,
            population_size: 1000,
            gene_min: 0.0,
            gene_max: None,
            gene_max_per_site: 1.0,
            saturation_generations: 20,
            num_parents: 200,
            selection: SelectionType::SteadyState,
            elitism_count: 100,
            crossover: CrossoverType::Uniform,
            crossover_probability: 0.6,
            mutation_probability: 0.1,
            strong_zeta: 0.05,
            strong_zeta_first_gene: 0.1,
            weak_zeta: 0.03,
            convergence_window: 10,
            convergence_threshold: 0.001,
            tolerance: 0.01,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneBounds {
    pub min: f64,
    pub max: f64,
}

impl GeneBounds {
    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.min, self.max)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.min..=self.max).contains(&x)
    }
}

impl GaHyperparameters {
    /// Tighter preset: tolerance 0.005, genes up to `1.2 N`, 3000 generations.
    pub fn stringent() -> Self {
        Self {
            tolerance: 0.005,
            gene_max_per_site: 1.2,
            max_generations: 3000,
            ..Self::default()
        }
    }

    pub fn bounds(&self, n_sites: usize) -> GeneBounds {
        GeneBounds {
            min: self.gene_min,
            max: self
                .gene_max
                .unwrap_or(self.gene_max_per_site * n_sites as f64),
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        let b = self.bounds(n_sites);
        if !(b.min.is_finite() && b.max.is_finite()) || b.min > b.max {
            return Err(Error::arg(
                "gene_min",
                format!("need finite gene_min <= gene_max, got [{}, {}]", b.min, b.max),
            ));
        }
        if b.min < 0.0 {
            return Err(Error::arg("gene_min", "couplings cannot be negative"));
        }
        if self.population_size == 0 {
            return Err(Error::arg("population_size", "must be positive"));
        }
        if self.num_parents == 0 || self.num_parents > self.population_size {
            return Err(Error::arg(
                "num_parents",
                format!("must lie in 1..={}", self.population_size),
            ));
        }
        if self.elitism_count > self.num_parents {
            return Err(Error::arg("elitism_count", "must not exceed num_parents"));
        }
        if self.max_generations == 0 {
            return Err(Error::arg("max_generations", "must be positive"));
        }
        for (field, p) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::arg(field, format!("probability {p} outside [0, 1]")));
            }
        }
        for (field, z) in [
            ("strong_zeta", self.strong_zeta),
            ("strong_zeta_first_gene", self.strong_zeta_first_gene),
            ("weak_zeta", self.weak_zeta),
        ] {
            if !(0.0..1.0).contains(&z) {
                return Err(Error::arg(field, format!("mutation range {z} outside [0, 1)")));
            }
        }
        if self.convergence_window == 0 {
            return Err(Error::arg("convergence_window", "must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1.0) {
            return Err(Error::arg("tolerance", "must lie in (0, 1]"));
        }
        Ok(())
    }
}
