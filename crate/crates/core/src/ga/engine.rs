use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hyper::{GaHyperparameters, GeneBounds};
use super::operators::{expand, expand_genes, mutate_with_regime, uniform_crossover, Genome, MutationRegime};
use crate::error::{Error, Result};
use crate::fitness::{FitnessSpec, Score};
use crate::profile::{CouplingProfile, TransferTask};
use crate::rng::stream;

/// Something the engine can maximize.
pub trait Objective: Sync {
    fn num_genes(&self) -> usize;
    fn evaluate(&self, genes: &[f64]) -> Result<Score>;
}

/// Designs a chain of `n_sites` for a transfer task under a fitness spec.
#[derive(Debug, Clone)]
pub struct ChainObjective {
    pub n_sites: usize,
    pub task: TransferTask,
    pub fitness: FitnessSpec,
}

impl ChainObjective {
    pub fn new(n_sites: usize, task: TransferTask, fitness: FitnessSpec) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::arg("n_sites", "a chain to design needs at least two sites"));
        }
        fitness.validate()?;
        Ok(Self {
            n_sites,
            task,
            fitness,
        })
    }
}

impl Objective for ChainObjective {
    fn num_genes(&self) -> usize {
        Genome::len_for(self.n_sites)
    }

    fn evaluate(&self, genes: &[f64]) -> Result<Score> {
        let couplings = expand_genes(genes, self.n_sites)?;
        self.fitness
            .score_couplings(&couplings, self.task.arrival_time())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub score: Option<Score>,
}

impl Individual {
    pub fn fitness(&self) -> Option<f64> {
        self.score.map(|s| s.fitness)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    individuals: Vec<Individual>,
}

impl Population {
    pub fn new(individuals: Vec<Individual>) -> Self {
        Self { individuals }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    fn scores(&self) -> Result<Vec<Score>> {
        self.individuals
            .iter()
            .map(|ind| {
                ind.score
                    .ok_or_else(|| Error::arg("population", "individual has not been evaluated"))
            })
            .collect()
    }

    /// Indices sorted by decreasing fitness; stable on ties.
    pub fn ranking(&self) -> Result<Vec<usize>> {
        let scores = self.scores()?;
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].fitness.total_cmp(&scores[a].fitness));
        Ok(order)
    }

    pub fn best(&self) -> Result<&Individual> {
        let order = self.ranking()?;
        order
            .first()
            .map(|&i| &self.individuals[i])
            .ok_or_else(|| Error::arg("population", "empty population"))
    }

    pub fn min_score(&self) -> Result<Score> {
        let scores = self.scores()?;
        Ok(Score {
            fitness: scores.iter().map(|s| s.fitness).fold(f64::INFINITY, f64::min),
            probability: scores
                .iter()
                .map(|s| s.probability)
                .fold(f64::INFINITY, f64::min),
        })
    }
}

const INIT_STREAM: u64 = u64::MAX;

/// Genes drawn uniformly from `bounds`; each individual gets its own stream.
pub fn init_population(
    hp: &GaHyperparameters,
    num_genes: usize,
    bounds: GeneBounds,
    seed: u64,
) -> Population {
    let individuals = (0..hp.population_size)
        .map(|i| {
            let mut rng = stream(seed, &[INIT_STREAM, i as u64]);
            let genes = (0..num_genes)
                .map(|_| {
                    if bounds.max > bounds.min {
                        rng.random_range(bounds.min..=bounds.max)
                    } else {
                        bounds.min
                    }
                })
                .collect();
            Individual {
                genome: Genome(genes),
                score: None,
            }
        })
        .collect();
    Population::new(individuals)
}

/// Scores every unevaluated individual in parallel; results land in index order.
pub fn evaluate_population<O: Objective>(pop: &mut Population, objective: &O) -> Result<()> {
    pop.individuals
        .par_iter_mut()
        .filter(|ind| ind.score.is_none())
        .try_for_each(|ind| {
            ind.score = Some(objective.evaluate(ind.genome.genes())?);
            Ok(())
        })
}

/// Next generation: the `elitism_count` fittest individuals unchanged, then
/// offspring from cyclically paired parents `(1,2), (3,4), ...` in rank
/// order, each crossed over, mutated and evaluated. `generation` is the
/// index of the generation being produced and seeds the offspring streams.
pub fn evolve_generation<O: Objective>(
    pop: &Population,
    history: &[f64],
    hp: &GaHyperparameters,
    bounds: GeneBounds,
    objective: &O,
    seed: u64,
    generation: usize,
) -> Result<Population> {
    let order = pop.ranking()?;
    if hp.num_parents > order.len() || hp.elitism_count > order.len() {
        return Err(Error::arg("num_parents", "more parents or elites than individuals"));
    }
    let parents = &order[..hp.num_parents];
    let regime = MutationRegime::from_history(history, hp);
    let n_offspring = hp.population_size.saturating_sub(hp.elitism_count);

    let offspring: Vec<Individual> = (0..n_offspring)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, &[generation as u64, k as u64]);
            let a = &pop.individuals[parents[(2 * k) % parents.len()]].genome;
            let b = &pop.individuals[parents[(2 * k + 1) % parents.len()]].genome;
            let child = uniform_crossover(a, b, hp.crossover_probability, &mut rng)?;
            let child = mutate_with_regime(&child, regime, hp, bounds, &mut rng);
            let score = objective.evaluate(child.genes())?;
            Ok(Individual {
                genome: child,
                score: Some(score),
            })
        })
        .collect::<Result<_>>()?;

    let mut next: Vec<Individual> = order[..hp.elitism_count]
        .iter()
        .map(|&i| pop.individuals[i].clone())
        .collect();
    next.extend(offspring);
    Ok(Population::new(next))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltingReason {
    Tolerance,
    MaxGenerations,
    Saturation,
}

impl std::fmt::Display for HaltingReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HaltingReason::Tolerance => "tolerance",
            HaltingReason::MaxGenerations => "max_generations",
            HaltingReason::Saturation => "saturation",
        })
    }
}

/// Complete trace of one GA run. Generation 1 is the random initial population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub rng_seed: u64,
    pub n_sites: usize,
    pub best_fitness_per_generation: Vec<f64>,
    pub best_genes: Vec<f64>,
    pub best_profile: CouplingProfile,
    pub best_fitness: f64,
    /// Transmission probability of the best individual.
    pub best_probability: f64,
    /// First generation at which the final best fitness was reached.
    pub best_generation: usize,
    pub generations: usize,
    pub halting_reason: HaltingReason,
    pub final_population_min_fitness: f64,
    pub final_population_min_probability: f64,
}

impl RunRecord {
    /// `generation,best_fitness` rows.
    pub fn trace_csv_rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.best_fitness_per_generation
            .iter()
            .enumerate()
            .map(|(g, &f)| (g + 1, f))
    }
}

const IMPROVEMENT_EPS: f64 = 1e-12;

/// Runs the GA until the tolerance is met, `max_generations` generations
/// exist, or the best fitness stalls for `saturation_generations`
/// consecutive generations.
pub fn run_ga(hp: &GaHyperparameters, objective: &ChainObjective, seed: u64) -> Result<RunRecord> {
    hp.validate(objective.n_sites)?;
    let bounds = hp.bounds(objective.n_sites);
    let mut pop = init_population(hp, objective.num_genes(), bounds, seed);
    evaluate_population(&mut pop, objective)?;

    let mut history = vec![pop.best()?.fitness().unwrap_or(0.0)];
    let mut best_generation = 1;
    let mut stalled = 0;
    let reason = loop {
        let best = *history.last().unwrap_or(&0.0);
        if best > 1.0 - hp.tolerance {
            break HaltingReason::Tolerance;
        }
        if history.len() >= hp.max_generations {
            break HaltingReason::MaxGenerations;
        }
        if hp.saturation_generations > 0 && stalled >= hp.saturation_generations {
            break HaltingReason::Saturation;
        }
        let generation = history.len() + 1;
        pop = evolve_generation(&pop, &history, hp, bounds, objective, seed, generation)?;
        let new_best = pop.best()?.fitness().unwrap_or(0.0);
        if new_best - best < IMPROVEMENT_EPS {
            stalled += 1;
        } else {
            stalled = 0;
            best_generation = generation;
        }
        history.push(new_best);
    };

    let best = pop.best()?;
    let score = best.score.unwrap_or(Score {
        fitness: 0.0,
        probability: 0.0,
    });
    let min = pop.min_score()?;
    let profile = expand(&best.genome, objective.n_sites)?
        .with_meta("fitness", objective.fitness.kind.to_string())
        .with_meta("arrival_time", objective.task.arrival_time())
        .with_meta("probability", score.probability)
        .with_meta("seed", seed);
    Ok(RunRecord {
        rng_seed: seed,
        n_sites: objective.n_sites,
        generations: history.len(),
        best_fitness_per_generation: history,
        best_genes: best.genome.0.clone(),
        best_profile: profile,
        best_fitness: score.fitness,
        best_probability: score.probability,
        best_generation,
        halting_reason: reason,
        final_population_min_fitness: min.fitness,
        final_population_min_probability: min.probability,
    })
}
