//! Spin-chain dynamics: sector Hamiltonians, eigensystems and transfer
//! probabilities.

pub mod block;
pub mod eigen;
pub mod oracle;
pub mod transfer;

pub use block::{
    binomial, build_k_excitation_block, build_one_excitation_block, KExcitationBlock, OneExcitationBlock,
    DEFAULT_SECTOR_CAP,
};
pub use eigen::{eigendecompose_dense, eigendecompose_tridiagonal, SpectralDecomposition};
pub use oracle::{full_hamiltonian, full_space_propagator_oracle};
pub use transfer::{
    arrival_distribution, arrival_distribution_of_block, average_fidelity, end_to_end_probability,
    transmission_probability,
};
