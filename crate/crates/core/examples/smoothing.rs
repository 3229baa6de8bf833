//! Effect of the roughness penalty: the same chain designed with and
//! without it.

use qst_design::fitness::roughness;
use qst_design::ga::{run_ga, ChainObjective, GaHyperparameters};
use qst_design::{FitnessSpec, TransferTask};

fn main() -> qst_design::Result<()> {
    let n = 21;
    let task = TransferTask::multiple_of_length(n, 2.0)?;
    let hp = GaHyperparameters::default();
    for spec in [FitnessSpec::fit1(), FitnessSpec::fit2(0.9)?] {
        let rec = run_ga(&hp, &ChainObjective::new(n, task, spec)?, 11)?;
        let j = rec.best_profile.couplings();
        println!(
            "{}: P = {:.6}, fitness = {:.6}, mean |dJ| = {:.4}, sum dJ^2 = {:.2}, generations = {}",
            spec.kind,
            rec.best_probability,
            rec.best_fitness,
            rec.best_profile.mean_abs_successive_difference(),
            roughness(j),
            rec.generations
        );
        let bars: Vec<String> = j.iter().map(|x| format!("{x:5.1}")).collect();
        println!("  J = [{}]", bars.join(" "));
    }
    Ok(())
}
