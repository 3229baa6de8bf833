use rand::Rng;
use serde::{Deserialize, Serialize};

use super::engine::Population;
use super::hyper::{GaHyperparameters, GeneBounds};
use crate::error::{Error, Result};
use crate::profile::CouplingProfile;

/// Half of a centrosymmetric profile: `ceil((N-1)/2)` genes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome(pub Vec<f64>);

impl Genome {
    pub fn len_for(n_sites: usize) -> usize {
        n_sites / 2
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Mirrors the genes into a full profile: `J_i = genes[min(i, N - i)]`
/// with 1-based `i` (0-based gene index `min(i, N - i) - 1`).
pub fn expand_genes(genes: &[f64], n_sites: usize) -> Result<Vec<f64>> {
    if n_sites < 2 {
        return Err(Error::arg("n_sites", "a chain to design needs at least two sites"));
    }
    if genes.len() != Genome::len_for(n_sites) {
        return Err(Error::arg(
            "genes",
            format!(
                "{} sites need {} genes, got {}",
                n_sites,
                Genome::len_for(n_sites),
                genes.len()
            ),
        ));
    }
    Ok((1..n_sites).map(|i| genes[i.min(n_sites - i) - 1]).collect())
}

pub fn expand(genome: &Genome, n_sites: usize) -> Result<CouplingProfile> {
    CouplingProfile::new(n_sites, expand_genes(genome.genes(), n_sites)?)
}

/// Indices of the `num_parents` fittest individuals, best first. Ties keep
/// population order.
pub fn select_parents_steady_state(pop: &Population, num_parents: usize) -> Result<Vec<usize>> {
    if num_parents > pop.len() {
        return Err(Error::arg(
            "num_parents",
            format!("asked for {num_parents} parents from {} individuals", pop.len()),
        ));
    }
    let mut order = pop.ranking()?;
    order.truncate(num_parents);
    Ok(order)
}

/// Child gene `i` comes from `a` where `take_a[i]`, otherwise from `b`.
pub fn crossover_with_mask(a: &Genome, b: &Genome, take_a: &[bool]) -> Result<Genome> {
    if a.len() != b.len() || a.len() != take_a.len() {
        return Err(Error::arg("genome", "crossover needs equal-length genomes and mask"));
    }
    Ok(Genome(
        a.0.iter()
            .zip(&b.0)
            .zip(take_a)
            .map(|((&x, &y), &pick)| if pick { x } else { y })
            .collect(),
    ))
}

/// With probability `crossover_probability` each gene is copied from a
/// uniformly chosen parent; otherwise the child is a copy of `a`.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    crossover_probability: f64,
    rng: &mut R,
) -> Result<Genome> {
    if a.len() != b.len() {
        return Err(Error::arg("genome", "crossover needs equal-length genomes"));
    }
    if !rng.random_bool(crossover_probability) {
        return Ok(a.clone());
    }
    let mask: Vec<bool> = (0..a.len()).map(|_| rng.random_bool(0.5)).collect();
    crossover_with_mask(a, b, &mask)
}

/// Mutation strength for one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationRegime {
    /// Wider range while the best fitness is still moving; the first gene
    /// gets its own range.
    Strong { zeta: f64, first_gene_zeta: f64 },
    /// Uniform narrow range after convergence.
    Weak { zeta: f64 },
}

impl MutationRegime {
    /// Strong until `convergence_window` generations have completed, then
    /// strong whenever any of the last `convergence_window` best-fitness
    /// values deviates from their mean by more than `convergence_threshold`.
    pub fn from_history(history: &[f64], hp: &GaHyperparameters) -> Self {
        let strong = MutationRegime::Strong {
            zeta: hp.strong_zeta,
            first_gene_zeta: hp.strong_zeta_first_gene,
        };
        let w = hp.convergence_window;
        if history.len() < w {
            return strong;
        }
        let recent = &history[history.len() - w..];
        let mean = recent.iter().sum::<f64>() / w as f64;
        if recent.iter().any(|x| (x - mean).abs() > hp.convergence_threshold) {
            strong
        } else {
            MutationRegime::Weak { zeta: hp.weak_zeta }
        }
    }

    pub fn zeta(&self, gene: usize) -> f64 {
        match *self {
            MutationRegime::Strong {
                zeta,
                first_gene_zeta,
            } => {
                if gene == 0 {
                    first_gene_zeta
                } else {
                    zeta
                }
            }
            MutationRegime::Weak { zeta } => zeta,
        }
    }

    pub fn is_strong(&self) -> bool {
        matches!(self, MutationRegime::Strong { .. })
    }
}

/// Each gene mutates with probability `mutation_probability` as
/// `g -> g (1 + delta)`, `delta ~ U[-zeta, zeta]`, then is clamped to bounds.
pub fn adaptive_mutation<R: Rng + ?Sized>(
    genome: &Genome,
    history: &[f64],
    hp: &GaHyperparameters,
    bounds: GeneBounds,
    rng: &mut R,
) -> Genome {
    mutate_with_regime(genome, MutationRegime::from_history(history, hp), hp, bounds, rng)
}

pub(crate) fn mutate_with_regime<R: Rng + ?Sized>(
    genome: &Genome,
    regime: MutationRegime,
    hp: &GaHyperparameters,
    bounds: GeneBounds,
    rng: &mut R,
) -> Genome {
    let genes = genome
        .0
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if hp.mutation_probability > 0.0 && rng.random_bool(hp.mutation_probability) {
                let zeta = regime.zeta(i);
                let delta = if zeta > 0.0 { rng.random_range(-zeta..=zeta) } else { 0.0 };
                bounds.clamp(g * (1.0 + delta))
            } else {
                g
            }
        })
        .collect();
    Genome(genes)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fitness::Score;
    use crate::ga::Individual;

    #[test]
    fn expansion_examples() {
        let (a, b) = (1.5, 2.5);
        assert_eq!(expand_genes(&[a, b], 5).unwrap(), vec![a, b, b, a]);
        assert_eq!(expand_genes(&[a, b], 4).unwrap(), vec![a, b, a]);
        assert_eq!(expand_genes(&[a], 2).unwrap(), vec![a]);
        assert!(expand_genes(&[a], 5).is_err());
        assert!(expand(&Genome(vec![a, b]), 5).unwrap().is_centrosymmetric());
    }

    fn pop_with(fitness: &[f64]) -> Population {
        Population::new(
            fitness
                .iter()
                .enumerate()
                .map(|(i, &f)| Individual {
                    genome: Genome(vec![i as f64]),
                    score: Some(Score {
                        fitness: f,
                        probability: f,
                    }),
                })
                .collect(),
        )
    }

    #[test]
    fn steady_state_selection() {
        let pop = pop_with(&[0.9, 0.5, 0.7]);
        assert_eq!(select_parents_steady_state(&pop, 2).unwrap(), vec![0, 2]);
        let flat = pop_with(&[0.3; 5]);
        assert_eq!(select_parents_steady_state(&flat, 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(select_parents_steady_state(&pop, 3).unwrap().len(), 3);
        assert!(select_parents_steady_state(&pop, 4).is_err());
    }

    #[test]
    fn selection_requires_evaluated_population() {
        let pop = Population::new(vec![Individual {
            genome: Genome(vec![1.0]),
            score: None,
        }]);
        assert!(select_parents_steady_state(&pop, 1).is_err());
    }

    #[test]
    fn crossover_of_identical_parents() {
        let a = Genome(vec![1.0, 2.0, 3.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(uniform_crossover(&a, &a, 1.0, &mut rng).unwrap(), a);
        }
        let b = Genome(vec![4.0, 5.0, 6.0]);
        assert_eq!(crossover_with_mask(&a, &b, &[true; 3]).unwrap(), a);
        assert_eq!(
            crossover_with_mask(&a, &b, &[true, false, true]).unwrap(),
            Genome(vec![1.0, 5.0, 3.0])
        );
        assert!(uniform_crossover(&a, &Genome(vec![1.0]), 1.0, &mut rng).is_err());
    }

    #[test]
    fn crossover_gene_frequency_is_balanced() {
        // binomial(10 000, 1/2) has sd 50, so [4700, 5300] is a 6-sigma band
        let a = Genome(vec![0.0; 4]);
        let b = Genome(vec![1.0; 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut from_a = [0usize; 4];
        let trials = 10_000;
        for _ in 0..trials {
            let child = uniform_crossover(&a, &b, 1.0, &mut rng).unwrap();
            for (k, g) in child.0.iter().enumerate() {
                if *g == 0.0 {
                    from_a[k] += 1;
                }
            }
        }
        for count in from_a {
            let f = count as f64 / trials as f64;
            assert!((0.47..=0.53).contains(&f), "{f}");
        }
    }

    #[test]
    fn no_crossover_clones_first_parent() {
        let a = Genome(vec![1.0, 2.0]);
        let b = Genome(vec![3.0, 4.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(uniform_crossover(&a, &b, 0.0, &mut rng).unwrap(), a);
    }

    #[test]
    fn early_generations_use_strong_mutation() {
        let hp = GaHyperparameters::default();
        let r = MutationRegime::from_history(&[0.1, 0.2, 0.3], &hp);
        assert!(r.is_strong());
        assert_eq!(r.zeta(0), 0.1);
        assert_eq!(r.zeta(1), 0.05);
        assert_eq!(r.zeta(7), 0.05);
    }

    #[test]
    fn flat_history_switches_to_weak_mutation() {
        let hp = GaHyperparameters::default();
        let r = MutationRegime::from_history(&[0.8; 10], &hp);
        assert_eq!(r, MutationRegime::Weak { zeta: 0.03 });
        assert_eq!(r.zeta(0), 0.03);
        let mut moving = vec![0.5; 15];
        moving[14] = 0.6;
        assert!(MutationRegime::from_history(&moving, &hp).is_strong());
        // movement outside the 10-generation window is ignored
        let mut old = vec![0.6; 15];
        old[0] = 0.1;
        assert!(!MutationRegime::from_history(&old, &hp).is_strong());
    }

    #[test]
    fn mutation_off_leaves_genome() {
        let hp = GaHyperparameters {
            mutation_probability: 0.0,
            ..Default::default()
        };
        let g = Genome(vec![1.0, 2.0, 3.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bounds = hp.bounds(7);
        assert_eq!(adaptive_mutation(&g, &[], &hp, bounds, &mut rng), g);
    }

    #[test]
    fn mutation_stays_in_range_and_bounds() {
        let hp = GaHyperparameters {
            mutation_probability: 1.0,
            ..Default::default()
        };
        let bounds = GeneBounds { min: 0.0, max: 10.0 };
        let g = Genome(vec![5.0, 5.0, 9.9]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let m = adaptive_mutation(&g, &[], &hp, bounds, &mut rng);
            assert!((m.0[0] - 5.0).abs() <= 0.5 + 1e-12);
            assert!((m.0[1] - 5.0).abs() <= 0.25 + 1e-12);
            assert!(m.0[2] <= 10.0);
        }
    }
}
