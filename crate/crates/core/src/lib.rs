//! Design of Heisenberg spin chains for quantum state transfer.
//!
//! The crate evolves centrosymmetric exchange-coupling profiles with a
//! genetic algorithm so that an excitation placed on the first site arrives
//! on the last one at a chosen time, and then characterizes the designed
//! chains:
//!
//! * [`dynamics`]: excitation-sector Hamiltonians, eigensystems, transfer
//!   probabilities and a brute-force full-Hilbert-space oracle.
//! * [`fitness`]: the plain (`fit1`) and roughness-penalized (`fit2`) scores.
//! * [`ga`]: steady-state GA with elitism, uniform crossover and adaptive
//!   mutation.
//! * [`disorder`]: Monte Carlo robustness under multiplicative Gaussian
//!   coupling noise and stretched-exponential decay fits.
//! * [`spectral`]: constructive-interference report, consecutive gap ratios
//!   and the Poisson reference law.
//! * [`campaign`]: end-to-end experiments writing CSV/JSON artifacts, used by
//!   the `qst-design` binary.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod campaign;
pub mod disorder;
pub mod dynamics;
pub mod error;
pub mod fitness;
pub mod ga;
pub mod profile;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use fitness::{FitnessKind, FitnessSpec};
pub use profile::{CouplingProfile, TransferTask};
