//! Transfer amplitudes in the one-excitation sector.

use num_complex::Complex64;

use super::block::OneExcitationBlock;
use super::eigen::tridiagonal_ql;
use crate::error::{Error, Result};
use crate::profile::{CouplingProfile, TransferTask};

/// `P_{1,N}(T) = |sum_i <N|v_i><v_i|1> exp(-i E_i T)|^2`.
pub fn transmission_probability(profile: &CouplingProfile, task: &TransferTask) -> Result<f64> {
    end_to_end_probability(profile.couplings(), task.arrival_time())
}

/// Same as [`transmission_probability`] for an arbitrary (possibly zero or
/// negative) time and raw couplings. Only the first and last eigenvector
/// rows are accumulated.
pub fn end_to_end_probability(couplings: &[f64], t: f64) -> Result<f64> {
    let block = OneExcitationBlock::from_couplings(couplings)?;
    end_to_end_probability_of_block(&block, t)
}

pub(crate) fn end_to_end_probability_of_block(block: &OneExcitationBlock, t: f64) -> Result<f64> {
    let n = block.dim();
    if n == 1 {
        return Ok(1.0);
    }
    let spec = tridiagonal_ql(&block.diag, &block.offdiag, &[0, n - 1])?;
    let amp = spec
        .eigenvalues
        .iter()
        .zip(spec.rows[0].iter().zip(&spec.rows[1]))
        .fold(Complex64::new(0.0, 0.0), |acc, (&e, (&first, &last))| {
            acc + Complex64::from_polar(first * last, -e * t)
        });
    Ok(amp.norm_sqr().min(1.0))
}

/// Arrival distribution `P_{1,j}(t)` for every site `j`; sums to one.
pub fn arrival_distribution(profile: &CouplingProfile, t: f64) -> Result<Vec<f64>> {
    let block = OneExcitationBlock::from_couplings(profile.couplings())?;
    arrival_distribution_of_block(&block, t)
}

pub fn arrival_distribution_of_block(block: &OneExcitationBlock, t: f64) -> Result<Vec<f64>> {
    let sd = block.eigendecompose()?;
    let n = sd.dim();
    let phases: Vec<Complex64> = sd
        .eigenvalues()
        .iter()
        .zip(sd.overlaps())
        .map(|(&e, chi)| Complex64::from_polar(chi, -e * t))
        .collect();
    let v = sd.eigenvectors();
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|i| phases[i] * v[(j, i)])
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect())
}

/// Average fidelity over the Bloch sphere, `1/2 + sqrt(p)/3 + p/6`.
pub fn average_fidelity(p: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&p) {
        return Err(Error::arg("p", format!("probability {p} outside [0, 1]")));
    }
    let p = p.clamp(0.0, 1.0);
    // (3 + 2 sqrt(p) + p) / 6 is exact at both endpoints
    Ok((3.0 + 2.0 * p.sqrt() + p) / 6.0)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;

    #[test]
    fn single_site_always_arrives() {
        let p = CouplingProfile::new(1, vec![]).unwrap();
        assert_eq!(transmission_probability(&p, &TransferTask::new(3.0).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn zero_time_is_identity() {
        let p = CouplingProfile::new(4, vec![1.0, 2.0, 1.0]).unwrap();
        assert!(end_to_end_probability(p.couplings(), 0.0).unwrap() < 1e-28);
        let dist = arrival_distribution(&p, 0.0).unwrap();
        assert!((dist[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_level_closed_form() {
        let p = CouplingProfile::new(2, vec![1.0]).unwrap();
        let got = transmission_probability(&p, &TransferTask::new(FRAC_PI_4).unwrap()).unwrap();
        assert!((got - 1.0).abs() < 1e-14);
        for t in [0.1, 0.3, 1.7] {
            let got = end_to_end_probability(p.couplings(), t).unwrap();
            assert!((got - (2.0 * t).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn fidelity_values() {
        assert_eq!(average_fidelity(1.0).unwrap(), 1.0);
        assert_eq!(average_fidelity(0.0).unwrap(), 0.5);
        assert!((average_fidelity(0.25).unwrap() - (0.5 + 0.5 / 3.0 + 0.25 / 6.0)).abs() < 1e-15);
        assert!(average_fidelity(1.0 + 1e-13).is_ok());
        assert!(average_fidelity(1.01).is_err());
        assert!(average_fidelity(-0.01).is_err());
        assert!(average_fidelity(f64::NAN).is_err());
    }
}
