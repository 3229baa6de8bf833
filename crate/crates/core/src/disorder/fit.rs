//! Least-squares fit of `P(sigma) = a exp(-b sigma^c) + d` to a disorder curve.

use serde::{Deserialize, Serialize};

use super::simplex::{nelder_mead, SimplexOptions};
use super::DisorderCurve;
use crate::error::{Error, Result};

/// Fits with a root-mean-square misfit above this are reported as failed.
pub const MAX_ACCEPTABLE_RESIDUAL: f64 = 0.05;

const MIN_POINTS: usize = 6;
const MAX_EXPONENT: f64 = 4.0;
const MAX_RESTARTS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Root-mean-square misfit over the grid.
    pub residual_norm: f64,
    /// False when the fitted decay is negligible, leaving `b` and `c`
    /// undetermined.
    pub identifiable: bool,
}

impl DecayFit {
    pub fn eval(&self, sigma: f64) -> f64 {
        model(&[self.a, self.b, self.c, self.d], sigma)
    }

    pub fn is_acceptable(&self) -> bool {
        self.residual_norm <= MAX_ACCEPTABLE_RESIDUAL
    }
}

fn model(p: &[f64], sigma: f64) -> f64 {
    p[0] * (-p[1] * sigma.powf(p[2])).exp() + p[3]
}

/// Fits the curve's means. Starts from `a = mean(0) - mean(sigma_max)`,
/// `b = N/10`, `c = 2`, `d = mean(sigma_max)` and restarts the simplex from
/// its own optimum until the objective stops improving. The exponent is
/// confined to `(0, 4]`.
pub fn fit_decay_curve(curve: &DisorderCurve) -> Result<DecayFit> {
    if curve.len() < MIN_POINTS {
        return Err(Error::arg(
            "curve",
            format!("need at least {MIN_POINTS} grid points to fit, got {}", curve.len()),
        ));
    }
    let xs = &curve.sigmas;
    let ys = &curve.means;
    let (lo, hi) = extreme_indices(xs);

    let objective = |p: &[f64]| -> f64 {
        if !(p[2] > 0.0 && p[2] <= MAX_EXPONENT) {
            return f64::INFINITY;
        }
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| (model(p, x) - y).powi(2))
            .sum::<f64>()
            / xs.len() as f64
    };

    let mut x = vec![ys[lo] - ys[hi], curve.n_sites as f64 / 10.0, 2.0, ys[hi]];
    let mut best = objective(&x);
    let opts = SimplexOptions::default();
    let mut converged = false;
    for _ in 0..MAX_RESTARTS {
        let steps: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let s = 0.1 * v.abs().max(0.05);
                // keep the first trial exponent inside the admissible range
                if i == 2 { s.min(0.5 * v.min(MAX_EXPONENT - v).max(1e-3)) } else { s }
            })
            .collect();
        let r = nelder_mead(objective, &x, &steps, opts);
        converged = r.converged;
        let improved = best - r.f;
        if r.f <= best {
            x = r.x;
            best = r.f;
        }
        if converged && improved <= 1e-14 * best.max(1e-300) {
            break;
        }
    }
    if !converged {
        return Err(Error::FitNotConverged {
            iterations: opts.max_iterations,
        });
    }

    let sigma_max = xs[hi];
    let decay = (x[0] * (1.0 - (-x[1] * sigma_max.powf(x[2])).exp())).abs();
    Ok(DecayFit {
        a: x[0],
        b: x[1],
        c: x[2],
        d: x[3],
        residual_norm: best.sqrt(),
        identifiable: decay > 1e-6,
    })
}

fn extreme_indices(xs: &[f64]) -> (usize, usize) {
    let lo = (0..xs.len()).min_by(|&a, &b| xs[a].total_cmp(&xs[b])).unwrap_or(0);
    let hi = (0..xs.len()).max_by(|&a, &b| xs[a].total_cmp(&xs[b])).unwrap_or(0);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(p: [f64; 4], n_sites: usize) -> DisorderCurve {
        let sigmas: Vec<f64> = (0..=20).map(|i| i as f64 * 0.025).collect();
        let means = sigmas.iter().map(|&s| model(&p, s)).collect();
        DisorderCurve {
            n_sites,
            n_realizations: 1,
            stds: vec![0.0; sigmas.len()],
            sigmas,
            means,
        }
    }

    #[test]
    fn recovers_noiseless_parameters() {
        let truth = [0.95, 3.0, 2.0, 0.04];
        let fit = fit_decay_curve(&synthetic(truth, 21)).unwrap();
        for (got, want) in [fit.a, fit.b, fit.c, fit.d].iter().zip(truth) {
            assert!(((got - want) / want).abs() < 0.01, "{fit:?}");
        }
        assert!(fit.residual_norm < 1e-6);
        assert!((fit.eval(0.0) - (fit.a + fit.d)).abs() < 1e-15);
        assert!(fit.identifiable && fit.is_acceptable());
    }

    #[test]
    fn constant_curve_is_flagged() {
        let mut curve = synthetic([0.0, 1.0, 2.0, 0.0], 21);
        curve.means = vec![0.6; curve.len()];
        let fit = fit_decay_curve(&curve).unwrap();
        assert!(fit.a.abs() < 1e-4, "{fit:?}");
        assert!((fit.d - 0.6).abs() < 1e-4, "{fit:?}");
        assert!(fit.residual_norm < 1e-6);
        assert!(!fit.identifiable);
    }

    #[test]
    fn too_few_points() {
        let mut curve = synthetic([0.9, 3.0, 2.0, 0.0], 21);
        curve.sigmas.truncate(5);
        curve.means.truncate(5);
        curve.stds.truncate(5);
        assert!(fit_decay_curve(&curve).is_err());
    }
}
