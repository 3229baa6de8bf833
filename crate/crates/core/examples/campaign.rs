//! Multi-run design campaign with summary statistics and on-disk artifacts.
//!
//! ```text
//! cargo run --release --example campaign -- out_dir
//! ```

use qst_design::campaign::{cmd_design, CampaignConfig};
use qst_design::FitnessSpec;

fn main() -> qst_design::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "campaign_out".into());
    let mut cfg = CampaignConfig::new(vec![11, 15, 21], FitnessSpec::fit1());
    cfg.n_runs = 8;
    cfg.master_seed = 2024;
    cfg.output_dir = out.into();

    let results = cmd_design(&cfg)?;
    println!("{:>4} {:>9} {:>9} {:>9} {:>9} {:>6} {:>9}", "N", "P_M", "<P>_M", "std", "P_m", "gen", "t/run [s]");
    for r in &results {
        let s = &r.summary;
        println!(
            "{:>4} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>6} {:>9.3}",
            s.n_sites,
            s.p_max,
            s.p_avg,
            s.p_avg_std,
            s.p_min,
            s.gen_of_p_max,
            r.mean_wall_time()
        );
    }
    println!("artifacts in {}", cfg.output_dir.display());
    Ok(())
}
