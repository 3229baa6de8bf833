//! Excitation-number sectors of the isotropic Heisenberg chain
//! `H = -sum_i J_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1})` written with
//! Pauli matrices.
//!
//! In the computational basis the bond term hops an excitation across the
//! bond with amplitude `-2 J_i` and contributes `-J_i` (aligned spins) or
//! `+J_i` (anti-aligned) to the diagonal.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::eigen::{eigendecompose_dense, eigendecompose_tridiagonal, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::profile::CouplingProfile;

/// Default dimension above which dense diagonalization is refused.
pub const DEFAULT_SECTOR_CAP: usize = 20_000;

/// One-excitation block `h_N`, a real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OneExcitationBlock {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl OneExcitationBlock {
    pub fn from_couplings(couplings: &[f64]) -> Result<Self> {
        if couplings.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidProfile("couplings must be finite".into()));
        }
        let n = couplings.len() + 1;
        let total: f64 = couplings.iter().sum();
        let bond = |i: isize| -> f64 {
            if i < 0 || i as usize >= couplings.len() {
                0.0
            } else {
                couplings[i as usize]
            }
        };
        let diag = (0..n as isize)
            .map(|j| -total + 2.0 * (bond(j - 1) + bond(j)))
            .collect();
        let offdiag = couplings.iter().map(|j| -2.0 * j).collect();
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                self.diag[r]
            } else if r + 1 == c {
                self.offdiag[r]
            } else if c + 1 == r {
                self.offdiag[c]
            } else {
                0.0
            }
        })
    }

    /// Adds `shift` to every diagonal entry.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| d + shift).collect(),
            offdiag: self.offdiag.clone(),
        }
    }

    pub fn eigendecompose(&self) -> Result<SpectralDecomposition> {
        eigendecompose_tridiagonal(&self.diag, &self.offdiag)
    }
}

/// Builds `h_N` from a profile.
pub fn build_one_excitation_block(profile: &CouplingProfile) -> Result<OneExcitationBlock> {
    OneExcitationBlock::from_couplings(profile.couplings())
}

/// Dense block for a fixed number `k` of excitations.
///
/// Basis states are the `k`-subsets of sites in lexicographic order of their
/// sorted (0-based) index lists, e.g. `{0,1} < {0,2} < {1,2}`.
#[derive(Debug, Clone)]
pub struct KExcitationBlock {
    pub k: usize,
    pub basis: Vec<Vec<usize>>,
    pub matrix: DMatrix<f64>,
}

impl KExcitationBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn eigendecompose(&self) -> Result<SpectralDecomposition> {
        eigendecompose_dense(&self.matrix)
    }
}

/// `C(n, k)` without overflow for the sizes we care about.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lexicographic `k`-subsets of `0..n`.
pub fn lexicographic_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
}

/// Builds the `k`-excitation sector. Logs a warning when the dimension
/// exceeds `cap`; callers that must not diagonalize such sectors check
/// [`binomial`] first.
pub fn build_k_excitation_block(profile: &CouplingProfile, k: usize, cap: usize) -> Result<KExcitationBlock> {
    let n = profile.n_sites();
    if k > n {
        return Err(Error::arg(
            "k",
            format!("cannot place {k} excitations on {n} sites"),
        ));
    }
    if n > 64 {
        return Err(Error::arg("n", "sector construction supports at most 64 sites"));
    }
    let dim = binomial(n, k);
    if dim > cap as u128 {
        log::warn!("k = {k} sector on {n} sites has dimension {dim}, above the dense cap {cap}");
    }

    let j = profile.couplings();
    let basis = lexicographic_subsets(n, k);
    let masks: Vec<u64> = basis
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect();
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();

    let d = basis.len();
    let mut matrix = DMatrix::zeros(d, d);
    for (row, &mask) in masks.iter().enumerate() {
        let mut diag = 0.0;
        for (bond, &jb) in j.iter().enumerate() {
            let a = mask >> bond & 1;
            let b = mask >> (bond + 1) & 1;
            if a == b {
                diag -= jb;
            } else {
                diag += jb;
                let hopped = mask ^ (0b11 << bond);
                let col = index[&hopped];
                matrix[(row, col)] = -2.0 * jb;
            }
        }
        matrix[(row, row)] = diag;
    }
    Ok(KExcitationBlock { k, basis, matrix })
}
