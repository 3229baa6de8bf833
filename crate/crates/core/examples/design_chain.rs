//! Evolve one coupling profile for a chain of N sites and report its
//! transfer quality.
//!
//! ```text
//! cargo run --release --example design_chain -- 21 fit1 7
//! ```

use std::time::Instant;

use qst_design::dynamics::average_fidelity;
use qst_design::ga::{run_ga, ChainObjective, GaHyperparameters};
use qst_design::{FitnessKind, FitnessSpec, TransferTask};

fn main() -> qst_design::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(21);
    let kind: FitnessKind = args.next().map(|s| s.parse()).transpose()?.unwrap_or(FitnessKind::Fit1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let fitness = match kind {
        FitnessKind::Fit1 => FitnessSpec::fit1(),
        FitnessKind::Fit2 => FitnessSpec::fit2(0.9)?,
    };
    let task = TransferTask::multiple_of_length(n, 2.0)?;
    let objective = ChainObjective::new(n, task, fitness)?;
    let hp = GaHyperparameters::default();

    let start = Instant::now();
    let record = run_ga(&hp, &objective, seed)?;
    let elapsed = start.elapsed();

    println!("N = {n}, T = {}, fitness = {kind}", task.arrival_time());
    println!(
        "halted after {} generations ({}) in {:.2?}",
        record.generations, record.halting_reason, elapsed
    );
    println!(
        "best fitness {:.6} (P = {:.6}, f_av = {:.6}) first reached in generation {}",
        record.best_fitness,
        record.best_probability,
        average_fidelity(record.best_probability)?,
        record.best_generation
    );
    println!("couplings:");
    for (i, j) in record.best_profile.couplings().iter().enumerate() {
        println!("  J_{:<3} = {j:.6}", i + 1);
    }
    println!(
        "mean |J_(i+1) - J_i| = {:.4}",
        record.best_profile.mean_abs_successive_difference()
    );
    Ok(())
}
