//! The velocity integrals that build the multiplicative Lagrangians, as plain
//! values and as `HyperDual` lifts.
//!
//! All three integrals are odd in the velocity; they are computed for |v| and
//! the sign is applied afterwards, which makes the odd symmetry exact rather
//! than a property of the quadrature. The `HyperDual` versions differentiate
//! through the integral sign: the value comes from the scalar routine and the
//! first/second derivative factors are the integrand and its derivative
//! evaluated at the endpoint.

use super::erf::erf;
use super::hyperdual::HyperDual;
use super::quadrature::{adaptive_quadrature, QuadratureSpec};
use crate::error::{Error, Result};

/// Velocities are kept this fraction of c away from the light cone; gamma
/// factors beyond it overflow any sensible budget.
pub const LIGHT_CONE_MARGIN: f64 = 1e-12;

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

pub(crate) fn check_speed(v: f64, c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "c must be positive and finite, got {c}"
        )));
    }
    if v.abs() <= (1.0 - LIGHT_CONE_MARGIN) * c {
        Ok(())
    } else {
        Err(Error::SpeedLimitExceeded { v, c })
    }
}

/// 1/sqrt(1 - v^2/c^2).
pub fn lorentz_gamma(v: f64, c: f64) -> Result<f64> {
    check_speed(v, c)?;
    let beta = v / c;
    Ok(1.0 / (1.0 - beta * beta).sqrt())
}

/// gamma(v) - 1 without cancellation at small |v|.
pub fn lorentz_gamma_minus_one(v: f64, c: f64) -> Result<f64> {
    let gamma = lorentz_gamma(v, c)?;
    let beta = v / c;
    Ok(beta * beta * gamma * gamma / (gamma + 1.0))
}

/// Integral of e^{-u^2/(2 lambda^2)} du from 0 to v, in closed form through
/// the error function.
pub fn gauss_velocity_integral(v: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("v must be finite, got {v}")));
    }
    let sqrt_half_pi = (0.5 * std::f64::consts::PI).sqrt();
    Ok(lambda * sqrt_half_pi * erf(v / (std::f64::consts::SQRT_2 * lambda)))
}

pub fn gauss_velocity_integral_hd(v: HyperDual, lambda: f64) -> Result<HyperDual> {
    let f0 = gauss_velocity_integral(v.re, lambda)?;
    let g = (-v.re * v.re / (2.0 * lambda * lambda)).exp();
    let dg = -(v.re / (lambda * lambda)) * g;
    Ok(v.chain(f0, g, dg))
}

/// Integral of gamma_u^3 e^{-gamma_u c^2/lambda^2} du from 0 to v.
///
/// Computed after the substitution w = gamma_u u (so dw = gamma_u^3 du),
/// which turns the integrand into the plain exponential
/// e^{-(c^2/lambda^2) sqrt(1 + (w/c)^2)} on [0, gamma_v v].
pub fn rel_velocity_integral(v: f64, c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let s = v.abs();
    let gamma = lorentz_gamma(s, c)?;
    let upper = gamma * s;
    let scale = c * c / (lambda * lambda);
    let spec = QuadratureSpec::default();
    let value = adaptive_quadrature(
        |w| {
            let r = w / c;
            (-scale * (1.0 + r * r).sqrt()).exp()
        },
        0.0,
        upper,
        &spec,
    )?;
    Ok(value.copysign(v))
}

pub fn rel_velocity_integral_hd(v: HyperDual, c: f64, lambda: f64) -> Result<HyperDual> {
    let f0 = rel_velocity_integral(v.re, c, lambda)?;
    let gamma = lorentz_gamma(v.re, c)?;
    let e = (-gamma * c * c / (lambda * lambda)).exp();
    let g3 = gamma * gamma * gamma;
    let f1 = g3 * e;
    let f2 = v.re * g3 * gamma * gamma * e * (3.0 / (c * c) - gamma / (lambda * lambda));
    Ok(v.chain(f0, f1, f2))
}

/// Same integral with the rest-energy factor e^{+c^2/lambda^2} divided out,
/// i.e. the integrand exponent uses gamma - 1. Keeps the non-relativistic
/// limit checks finite when c^2/lambda^2 is huge.
pub fn rel_velocity_integral_rest_scaled(v: f64, c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let s = v.abs();
    let gamma = lorentz_gamma(s, c)?;
    let upper = gamma * s;
    let spec = QuadratureSpec::default();
    let value = adaptive_quadrature(
        |w| {
            let r = w / c;
            // (sqrt(1 + r^2) - 1) evaluated without cancellation
            let gm1 = r * r / ((1.0 + r * r).sqrt() + 1.0);
            (-(c * c / (lambda * lambda)) * gm1).exp()
        },
        0.0,
        upper,
        &spec,
    )?;
    Ok(value.copysign(v))
}

/// Integral of gamma_u^k du from 0 to v, by adaptive quadrature.
pub fn gamma_power_integral(v: f64, c: f64, k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidParameter(
            "gamma_power_integral needs k >= 1".into(),
        ));
    }
    let s = v.abs();
    check_speed(s, c)?;
    let spec = QuadratureSpec::default();
    let half_k = f64::from(k) / 2.0;
    let value = adaptive_quadrature(
        |u| {
            let beta = u / c;
            (1.0 - beta * beta).powf(-half_k)
        },
        0.0,
        s,
        &spec,
    )?;
    Ok(value.copysign(v))
}

pub fn gamma_power_integral_hd(v: HyperDual, c: f64, k: u32) -> Result<HyperDual> {
    let f0 = gamma_power_integral(v.re, c, k)?;
    let gamma = lorentz_gamma(v.re, c)?;
    let f1 = gamma.powi(k as i32);
    let f2 = f64::from(k) * v.re * gamma.powi(k as i32 + 2) / (c * c);
    Ok(v.chain(f0, f1, f2))
}
