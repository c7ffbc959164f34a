//! Special-function kernels, adaptive quadrature and second-order automatic
//! differentiation shared by every other module.

mod erf;
mod hyperdual;
mod kernels;
mod quadrature;

pub use erf::erf;
pub use hyperdual::HyperDual;
pub use kernels::{
    gamma_power_integral, gamma_power_integral_hd, gauss_velocity_integral,
    gauss_velocity_integral_hd, lorentz_gamma, lorentz_gamma_minus_one, rel_velocity_integral,
    rel_velocity_integral_hd, rel_velocity_integral_rest_scaled, LIGHT_CONE_MARGIN,
};
pub use quadrature::{adaptive_quadrature, QuadratureSpec};

pub(crate) use kernels::{check_lambda, check_speed};

use crate::error::{Error, Result};

/// Value and the partial derivatives needed for Euler-Lagrange extraction:
/// first partials in both variables, the pure second partial in the second
/// variable and the mixed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub value: f64,
    pub d_x: f64,
    pub d_v: f64,
    pub d_vv: f64,
    pub d_xv: f64,
}

/// Evaluate `f` at (x, v) with x seeded as the first variable and v as the
/// second, returning the value and partials. Non-finite derivative data
/// (e.g. from ln or sqrt outside their domains) is reported as
/// `UnsupportedOperation` instead of leaking NaNs.
pub fn eval_with_second_derivs<F>(f: F, x: f64, v: f64) -> Result<Partials>
where
    F: Fn(HyperDual, HyperDual) -> Result<HyperDual>,
{
    let out = f(HyperDual::var1(x), HyperDual::var2(v))?;
    if !out.is_finite() {
        return Err(Error::UnsupportedOperation(format!(
            "derivative data is not finite at (x, v) = ({x:e}, {v:e})"
        )));
    }
    Ok(Partials {
        value: out.re,
        d_x: out.e1,
        d_v: out.e2,
        d_vv: out.e22,
        d_xv: out.e12,
    })
}
