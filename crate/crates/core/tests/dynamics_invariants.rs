use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::Rng;

use qst_design::dynamics::{
    arrival_distribution, arrival_distribution_of_block, build_k_excitation_block, build_one_excitation_block,
    end_to_end_probability, full_hamiltonian, full_space_propagator_oracle, DEFAULT_SECTOR_CAP,
};
use qst_design::rng::stream;
use qst_design::CouplingProfile;

fn profile_strategy(max_n: usize) -> impl Strategy<Value = CouplingProfile> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.0f64..3.0, n - 1).prop_map(move |j| CouplingProfile::new(n, j).unwrap())
    })
}

fn centrosymmetric_strategy() -> impl Strategy<Value = CouplingProfile> {
    (3usize..=25).prop_flat_map(|n| {
        prop::collection::vec(0.05f64..5.0, n / 2).prop_map(move |half| {
            let j = (1..n).map(|i| half[i.min(n - i) - 1]).collect();
            CouplingProfile::new(n, j).unwrap()
        })
    })
}

#[test]
fn matches_full_space_oracle() {
    let mut rng = stream(99, &[]);
    for n in 2..=7 {
        for _ in 0..30 {
            let j: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..2.0)).collect();
            let p = CouplingProfile::new(n, j).unwrap();
            let t = rng.random_range(0.0..20.0);
            let fast = end_to_end_probability(p.couplings(), t).unwrap();
            let slow = full_space_propagator_oracle(&p, t, 1, n).unwrap();
            assert!((fast - slow).abs() < 1e-10, "n={n} t={t}: {fast} vs {slow}");
        }
    }
}

#[test]
fn interior_amplitudes_match_oracle() {
    let p = CouplingProfile::new(5, vec![0.3, 1.1, 0.7, 0.9]).unwrap();
    let dist = arrival_distribution(&p, 3.7).unwrap();
    for (site, &prob) in dist.iter().enumerate() {
        let slow = full_space_propagator_oracle(&p, 3.7, 1, site + 1).unwrap();
        assert!((prob - slow).abs() < 1e-10);
    }
}

#[test]
fn sectors_reproduce_full_spectrum() {
    let p = CouplingProfile::new(4, vec![0.4, 1.3, 0.8]).unwrap();
    let full = full_hamiltonian(&p).unwrap();
    let mut expected: Vec<f64> = SymmetricEigen::new(full).eigenvalues.iter().copied().collect();
    expected.sort_by(f64::total_cmp);

    let mut sectors = Vec::new();
    for k in 0..=4 {
        let block = build_k_excitation_block(&p, k, DEFAULT_SECTOR_CAP).unwrap();
        sectors.extend_from_slice(block.eigendecompose().unwrap().eigenvalues());
    }
    sectors.sort_by(f64::total_cmp);
    assert_eq!(sectors.len(), 16);
    for (a, b) in sectors.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn two_excitation_block_matches_full_matrix_elements() {
    let p = CouplingProfile::new(4, vec![0.4, 1.3, 0.8]).unwrap();
    let full = full_hamiltonian(&p).unwrap();
    let block = build_k_excitation_block(&p, 2, DEFAULT_SECTOR_CAP).unwrap();
    let mask = |s: &Vec<usize>| s.iter().fold(0usize, |m, &i| m | 1 << i);
    for (r, a) in block.basis.iter().enumerate() {
        for (c, b) in block.basis.iter().enumerate() {
            let z = full[(mask(a), mask(b))];
            assert!(z.im.abs() < 1e-14);
            assert!((z.re - block.matrix[(r, c)]).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(p in profile_strategy(30), t in 0.0f64..100.0) {
        let total: f64 = arrival_distribution(&p, t).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_shift_is_a_global_phase(p in profile_strategy(20), t in 0.0f64..50.0, shift in -50.0f64..50.0) {
        let block = build_one_excitation_block(&p).unwrap();
        let a = arrival_distribution_of_block(&block, t).unwrap();
        let b = arrival_distribution_of_block(&block.shifted(shift), t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn time_reversal(p in profile_strategy(20), t in 0.0f64..50.0) {
        let fwd = end_to_end_probability(p.couplings(), t).unwrap();
        let bwd = end_to_end_probability(p.couplings(), -t).unwrap();
        prop_assert!((fwd - bwd).abs() < 1e-10);
    }

    #[test]
    fn reversed_chain_transfers_identically(p in profile_strategy(20), t in 0.0f64..50.0) {
        let mut rev = p.couplings().to_vec();
        rev.reverse();
        let a = end_to_end_probability(p.couplings(), t).unwrap();
        let b = end_to_end_probability(&rev, t).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn centrosymmetric_eigenvectors_are_mirror_symmetric(p in centrosymmetric_strategy()) {
        let sd = build_one_excitation_block(&p).unwrap().eigendecompose().unwrap();
        let n = sd.dim();
        for i in sd.nondegenerate_indices(1e-6) {
            let v = sd.eigenvector(i);
            prop_assert!((v[0].abs() - v[n - 1].abs()).abs() < 1e-8);
        }
    }
}
