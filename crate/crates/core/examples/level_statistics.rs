//! Gap-ratio statistics across excitation sectors and the constructive
//! interference pattern of the one-excitation spectrum.

use qst_design::dynamics::binomial;
use qst_design::ga::{run_ga, ChainObjective, GaHyperparameters};
use qst_design::spectral::{
    kay_report, mean, poisson_mean_ratio, sector_gap_ratio_histogram, sector_gap_ratios, Pooling,
};
use qst_design::{FitnessSpec, TransferTask};

fn main() -> qst_design::Result<()> {
    let n = 13;
    let task = TransferTask::multiple_of_length(n, 2.0)?;
    let obj = ChainObjective::new(n, task, FitnessSpec::fit2(0.9)?)?;
    let record = run_ga(&GaHyperparameters::default(), &obj, 3)?;
    let profile = record.best_profile;
    println!("fit2 design, N = {n}: P = {:.6}", record.best_probability);

    let k_max = 3;
    for k in 1..=k_max {
        println!("  sector k = {k}: dimension {}", binomial(n, k));
    }
    for pooling in [Pooling::WithinSector, Pooling::AcrossSectors] {
        let r = sector_gap_ratios(&profile, k_max, pooling, 20_000)?;
        println!("{pooling:?}: {} ratios, <r> = {:.4}", r.len(), mean(&r));
    }
    println!("Poisson <r> = {:.4}, GOE <r> ~ 0.5307", poisson_mean_ratio());

    let h = sector_gap_ratio_histogram(&profile, k_max, Pooling::WithinSector, 20_000)?;
    println!("chi-square distance to Poisson: {:.4}", h.chi_square_to_poisson());

    let kay = kay_report(&profile, &task)?;
    println!("\nalpha = pi/T = {:.6}", kay.alpha);
    println!("{:>3} {:>12} {:>9} {:>8} {:>5} {:>9}", "i", "E_i", "c_i", "gap/a", "odd", "residual");
    for l in &kay.levels {
        let opt = |x: Option<f64>, w: usize, d: usize| x.map_or(format!("{:>w$}", "-"), |v| format!("{v:>w$.d$}"));
        println!(
            "{:>3} {:>12.6} {:>9.6} {} {:>5} {}{}",
            l.index,
            l.energy,
            l.weight,
            opt(l.gap_ratio, 8, 4),
            l.nearest_odd.map_or("-".into(), |k| k.to_string()),
            opt(l.odd_residual, 9, 4),
            if l.active { "  *" } else { "" }
        );
    }
    println!(
        "{} active levels carry {:.4} of the weight",
        kay.active_indices().len(),
        kay.active_weight()
    );
    Ok(())
}
