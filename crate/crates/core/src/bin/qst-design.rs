use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use qst_design::campaign::{
    cmd_design, cmd_disorder, cmd_spectra, CampaignConfig, DisorderCommandConfig, SpectraCommandConfig,
};
use qst_design::spectral::Pooling;
use qst_design::{Error, FitnessKind, FitnessSpec};

#[derive(Parser)]
#[command(name = "qst-design", version, about = "Design and analyse spin chains for end-to-end state transfer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
    /// T = multiple * N.
    #[arg(long)]
    arrival_multiple: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run GA design campaigns.
    Design {
        #[command(flatten)]
        common: Common,
        /// Chain length(s); repeat or comma-separate.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        fitness: Option<FitnessKind>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        max_generations: Option<usize>,
    },
    /// Monte Carlo static-disorder sweep of a stored profile.
    Disorder {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Comma-separated disorder strengths.
        #[arg(long, value_delimiter = ',')]
        sigmas: Vec<f64>,
        #[arg(long)]
        realizations: Option<usize>,
    },
    /// Gap-ratio statistics and spectral analysis of a stored profile.
    Spectra {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_parser = parse_pooling)]
        pooling: Option<Pooling>,
    },
}

fn parse_pooling(s: &str) -> Result<Pooling, String> {
    match s {
        "within" | "within_sector" => Ok(Pooling::WithinSector),
        "across" | "across_sectors" => Ok(Pooling::AcrossSectors),
        _ => Err(format!("unknown pooling `{s}` (expected within|across)")),
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_configuration() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn missing_profile() -> Failure {
    Failure::Config("no profile given (use --profile or a config file)".into())
}

fn design(
    common: Common,
    n: Vec<usize>,
    fitness: Option<FitnessKind>,
    beta: Option<f64>,
    tolerance: Option<f64>,
    runs: Option<usize>,
    max_generations: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = match &common.config {
        Some(path) => CampaignConfig::load(path)?,
        None => {
            if n.is_empty() {
                return Err(Failure::Config("no chain length given (use --n or a config file)".into()));
            }
            CampaignConfig::new(n.clone(), FitnessSpec::fit1())
        }
    };
    if !n.is_empty() {
        cfg.chain_lengths = n;
    }
    match (fitness, beta) {
        (Some(FitnessKind::Fit1), Some(_)) => return Err(Failure::Config("--beta only applies to fit2".into())),
        (Some(FitnessKind::Fit1), None) => cfg.fitness = FitnessSpec::fit1(),
        (Some(FitnessKind::Fit2), b) => cfg.fitness = FitnessSpec::fit2(b.unwrap_or(qst_design::fitness::DEFAULT_BETA))?,
        (None, Some(b)) => cfg.fitness.beta = b,
        (None, None) => {}
    }
    if let Some(t) = tolerance {
        cfg.hyperparameters.tolerance = t;
    }
    if let Some(g) = max_generations {
        cfg.hyperparameters.max_generations = g;
    }
    if let Some(r) = runs {
        cfg.n_runs = r;
    }
    if let Some(s) = common.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = common.out {
        cfg.output_dir = o;
    }
    if let Some(m) = common.arrival_multiple {
        cfg.arrival_multiple = m;
    }
    if common.workers.is_some() {
        cfg.workers = common.workers;
    }
    let results = cmd_design(&cfg)?;
    for r in &results {
        let s = &r.summary;
        println!(
            "N={:<4} P_M={:.6} <P>_M={:.6} ± {:.6} P_m={:.6} gen(P_M)={}",
            s.n_sites, s.p_max, s.p_avg, s.p_avg_std, s.p_min, s.gen_of_p_max
        );
    }
    info!("outputs written to {}", cfg.output_dir.display());
    Ok(())
}

fn disorder(
    common: Common,
    profile: Option<PathBuf>,
    sigmas: Vec<f64>,
    realizations: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = match (&common.config, profile.clone()) {
        (Some(path), _) => DisorderCommandConfig::load(path)?,
        (None, Some(p)) => DisorderCommandConfig::new(p),
        (None, None) => return Err(missing_profile()),
    };
    if let Some(p) = profile {
        cfg.profile = p;
    }
    if !sigmas.is_empty() {
        cfg.sigmas = sigmas;
    }
    if let Some(r) = realizations {
        cfg.n_realizations = r;
    }
    if let Some(s) = common.seed {
        cfg.rng_seed = s;
    }
    if let Some(o) = common.out {
        cfg.output_dir = o;
    }
    if let Some(m) = common.arrival_multiple {
        cfg.arrival_multiple = m;
    }
    if common.workers.is_some() {
        cfg.workers = common.workers;
    }
    let outcome = cmd_disorder(&cfg)?;
    println!("design P = {:.6}", outcome.design_probability);
    for i in 0..outcome.curve.len() {
        println!(
            "sigma={:.4} mean={:.6} std={:.6}",
            outcome.curve.sigmas[i], outcome.curve.means[i], outcome.curve.stds[i]
        );
    }
    match outcome.fit {
        None => warn!("fewer than 6 disorder strengths; decay fit skipped"),
        Some(f) => {
            println!(
                "fit: a={:.6} b={:.6} c={:.6} d={:.6} residual={:.3e}",
                f.a, f.b, f.c, f.d, f.residual_norm
            );
            if !f.identifiable {
                warn!("curve is flat; b and c are not identifiable");
            }
            if !f.is_acceptable() {
                return Err(Failure::Runtime(format!(
                    "decay fit rejected: residual {:.3e} above threshold",
                    f.residual_norm
                )));
            }
        }
    }
    Ok(())
}

fn spectra(
    common: Common,
    profile: Option<PathBuf>,
    k_max: Option<usize>,
    pooling: Option<Pooling>,
) -> Result<(), Failure> {
    let mut cfg = match (&common.config, profile.clone()) {
        (Some(path), _) => SpectraCommandConfig::load(path)?,
        (None, Some(p)) => SpectraCommandConfig::new(p),
        (None, None) => return Err(missing_profile()),
    };
    if let Some(p) = profile {
        cfg.profile = p;
    }
    if let Some(k) = k_max {
        cfg.k_max = k;
    }
    if let Some(p) = pooling {
        cfg.pooling = p;
    }
    if let Some(o) = common.out {
        cfg.output_dir = o;
    }
    if let Some(m) = common.arrival_multiple {
        cfg.arrival_multiple = m;
    }
    if common.seed.is_some() {
        warn!("--seed has no effect on spectra");
    }
    let outcome = cmd_spectra(&cfg)?;
    println!(
        "{} gap ratios, <r> = {:.6}, chi2 to Poisson = {:.6}",
        outcome.histogram.n_ratios,
        outcome.mean_ratio(),
        outcome.histogram.chi_square_to_poisson()
    );
    println!(
        "alpha = {:.6}, {} active levels carrying weight {:.6}",
        outcome.kay.alpha,
        outcome.kay.active_indices().len(),
        outcome.kay.active_weight()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Design {
            common,
            n,
            fitness,
            beta,
            tolerance,
            runs,
            max_generations,
        } => design(common, n, fitness, beta, tolerance, runs, max_generations),
        Command::Disorder {
            common,
            profile,
            sigmas,
            realizations,
        } => disorder(common, profile, sigmas, realizations),
        Command::Spectra {
            common,
            profile,
            k_max,
            pooling,
        } => spectra(common, profile, k_max, pooling),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
