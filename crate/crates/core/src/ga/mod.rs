//! Real-valued genetic algorithm over centrosymmetric coupling profiles.
//!
//! Steady-state parent selection, elitism, uniform crossover and an
//! adaptive multiplicative mutation whose strength drops once the best
//! fitness history settles.

mod engine;
mod hyper;
mod operators;
mod summary;

pub use engine::{
    evaluate_population, evolve_generation, init_population, run_ga, ChainObjective, HaltingReason, Individual,
    Objective, Population, RunRecord,
};
pub use hyper::{CrossoverType, GaHyperparameters, GeneBounds, SelectionType};
pub use operators::{
    adaptive_mutation, crossover_with_mask, expand, select_parents_steady_state, uniform_crossover, Genome,
    MutationRegime,
};
pub use summary::{summarize_runs, ExperimentSummary};
