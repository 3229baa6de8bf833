//! Brute-force propagator on the full `2^N` Hilbert space.
//!
//! The Hamiltonian is assembled literally from Pauli strings acting on
//! computational basis states, independently of the sector rules in
//! [`super::block`], and exponentiated through a dense Hermitian
//! eigendecomposition. Meant for verification at small `N`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::CouplingProfile;

pub const MAX_ORACLE_SITES: usize = 12;

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

/// Action of a single Pauli matrix on qubit `q` of basis state `state`
/// (bit set = |1>). Returns the image state and its amplitude.
fn apply(p: Pauli, q: usize, state: usize) -> (usize, Complex64) {
    let bit = state >> q & 1;
    let i = Complex64::i();
    match p {
        Pauli::X => (state ^ 1 << q, Complex64::new(1.0, 0.0)),
        // Y|0> = i|1>, Y|1> = -i|0>
        Pauli::Y => (state ^ 1 << q, if bit == 0 { i } else { -i }),
        Pauli::Z => (state, Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0)),
    }
}

/// Dense `2^N x 2^N` Hamiltonian. Site `s` (1-based) is qubit `s - 1`.
pub fn full_hamiltonian(profile: &CouplingProfile) -> Result<DMatrix<Complex64>> {
    let n = profile.n_sites();
    if n > MAX_ORACLE_SITES {
        return Err(Error::arg(
            "n",
            format!("full-space oracle limited to {MAX_ORACLE_SITES} sites, got {n}"),
        ));
    }
    let dim = 1usize << n;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for (bond, &j) in profile.couplings().iter().enumerate() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            for col in 0..dim {
                let (mid, a1) = apply(p, bond + 1, col);
                let (row, a2) = apply(p, bond, mid);
                h[(row, col)] -= a1 * a2 * j;
            }
        }
    }
    Ok(h)
}

/// Basis index of the one-excitation state `|site>` (1-based site).
pub fn single_excitation_state(site: usize) -> usize {
    1 << (site - 1)
}

/// `|<i| exp(-i t H) |j>|^2` for one-excitation states at 1-based sites `i`, `j`.
pub fn full_space_propagator_oracle(profile: &CouplingProfile, t: f64, i: usize, j: usize) -> Result<f64> {
    let n = profile.n_sites();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::arg("site", format!("sites must lie in 1..={n}")));
    }
    let h = full_hamiltonian(profile)?;
    let eig = SymmetricEigen::new(h);
    let a = single_excitation_state(i);
    let b = single_excitation_state(j);
    let u = &eig.eigenvectors;
    let amp: Complex64 = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &e)| u[(a, k)] * u[(b, k)].conj() * Complex64::from_polar(1.0, -e * t))
        .sum();
    Ok(amp.norm_sqr())
}
