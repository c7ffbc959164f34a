//! The one-dimensional potentials the models are verified against, each with
//! an analytic first derivative.

use crate::error::{Error, Result};
use crate::numerics::HyperDual;

/// Points closer to the Calogero-Moser singularity than this are rejected so
/// trajectories stop cleanly instead of producing NaNs.
pub const CALOGERO_MOSER_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Free,
    Harmonic { m: f64, omega: f64 },
    /// g^2 x^2, the harmonic pair interaction in relative coordinates.
    PairHarmonic { g: f64 },
    /// g^2 / x^2, defined away from x = 0.
    CalogeroMoser { g: f64 },
    Polynomial { coeffs: Vec<f64> },
}

impl Potential {
    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::DomainError(format!("position {x} is not finite")));
        }
        if let Potential::CalogeroMoser { .. } = self {
            if x.abs() < CALOGERO_MOSER_GUARD {
                return Err(Error::DomainError(format!(
                    "|x| = {:.3e} is inside the Calogero-Moser guard {CALOGERO_MOSER_GUARD:.0e}",
                    x.abs()
                )));
            }
        }
        Ok(())
    }

    pub fn eval_v(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            Potential::Free => 0.0,
            Potential::Harmonic { m, omega } => 0.5 * m * omega * omega * x * x,
            Potential::PairHarmonic { g } => g * g * x * x,
            Potential::CalogeroMoser { g } => g * g / (x * x),
            Potential::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
            }
        })
    }

    pub fn eval_dv(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            Potential::Free => 0.0,
            Potential::Harmonic { m, omega } => m * omega * omega * x,
            Potential::PairHarmonic { g } => 2.0 * g * g * x,
            Potential::CalogeroMoser { g } => -2.0 * g * g / (x * x * x),
            Potential::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (k, &a) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * x + k as f64 * a;
                }
                acc
            }
        })
    }

    /// V(x) with derivative propagation, for use inside Lagrangian and
    /// Hamiltonian evaluations.
    pub fn eval_v_hd(&self, x: HyperDual) -> Result<HyperDual> {
        self.check_domain(x.re)?;
        Ok(match self {
            Potential::Free => HyperDual::constant(0.0),
            Potential::Harmonic { m, omega } => x * x * (0.5 * m * omega * omega),
            Potential::PairHarmonic { g } => x * x * (g * g),
            Potential::CalogeroMoser { g } => (x * x).recip() * (g * g),
            Potential::Polynomial { coeffs } => coeffs
                .iter()
                .rev()
                .fold(HyperDual::constant(0.0), |acc, &a| acc * x + a),
        })
    }
}
