//! Equation-of-motion extraction and equivalence scanning.
//!
//! The Euler-Lagrange equation of any model here is
//! dL/dx - v d2L/dxdv - a d2L/dv2 = 0, so the induced acceleration is
//! recovered by solving for a with the second partials from the derivative
//! engine. Scanning that acceleration against the plain Newtonian or
//! relativistic reference over a phase-space grid is the core equivalence
//! check: every family must reproduce the reference dynamics wherever its
//! velocity Hessian is nondegenerate.

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianModel;
use crate::lagrangians::{LagrangianModel, ModelParams};
use crate::numerics::{check_speed, eval_with_second_derivs, HyperDual};
use crate::potentials::Potential;

/// Hessian floor in units of the mass: below m times this the
/// Euler-Lagrange division is meaningless and the point is reported as
/// degenerate instead.
pub const HESSIAN_FLOOR_SCALE: f64 = 1e-10;

/// Relative margin kept between scan grids and the light cone.
const SCAN_LIGHT_CONE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    Newtonian,
    Relativistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EomReport {
    pub grid_size: usize,
    pub max_abs_residual: f64,
    pub worst_point: (f64, f64),
    pub degenerate_points_skipped: usize,
}

/// Acceleration induced by the model's Euler-Lagrange equation at (x, v).
pub fn acceleration_from_lagrangian(model: &LagrangianModel, x: f64, v: f64) -> Result<f64> {
    let parts = eval_with_second_derivs(|xh, vh| model.eval_hd(xh, vh), x, v)?;
    let floor = HESSIAN_FLOOR_SCALE * model.params.m;
    if parts.d_vv.abs() < floor {
        return Err(Error::DegenerateHessian {
            hessian: parts.d_vv,
            floor,
        });
    }
    Ok((parts.d_x - v * parts.d_xv) / parts.d_vv)
}

/// The dynamics every family is measured against: Newton's -V'/m, or its
/// relativistic counterpart -V'/(m gamma^3) from m d(gamma v)/dt = -V'.
pub fn reference_acceleration(
    kind: ReferenceKind,
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    v: f64,
) -> Result<f64> {
    let dv = pot.eval_dv(x)?;
    match kind {
        ReferenceKind::Newtonian => Ok(-dv / params.m),
        ReferenceKind::Relativistic => {
            let c = params.c()?;
            check_speed(v, c)?;
            let gamma2 = 1.0 / (1.0 - v * v / (c * c));
            Ok(-dv / (params.m * gamma2 * gamma2.sqrt()))
        }
    }
}

/// Hamilton's equations (dH/dp, -dH/dx). For the multiplicative and
/// hierarchy families dx/dt is not p/m; both components carry the family's
/// conserved flow factor relative to the additive field.
pub fn hamilton_rhs(model: &HamiltonianModel, x: f64, p: f64) -> Result<(f64, f64)> {
    let out = model.eval_hd(HyperDual::var1(x), HyperDual::var2(p))?;
    if !(out.e1.is_finite() && out.e2.is_finite()) {
        return Err(Error::UnsupportedOperation(format!(
            "Hamiltonian gradient not finite at x = {x:e}, p = {p:e}"
        )));
    }
    Ok((out.e2, -out.e1))
}

/// Compare the model's induced acceleration against the reference over an
/// n x n grid. Degenerate-Hessian points are skipped and counted; all other
/// errors abort the scan.
pub fn eom_equivalence_scan(
    model: &LagrangianModel,
    kind: ReferenceKind,
    x_range: (f64, f64),
    v_range: (f64, f64),
    n: usize,
) -> Result<EomReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "scan grid needs at least 2 points per axis, got {n}"
        )));
    }
    let (x_lo, x_hi) = x_range;
    let (mut v_lo, mut v_hi) = v_range;
    if model.family.is_relativistic() {
        let v_max = model.params.c()? * (1.0 - SCAN_LIGHT_CONE_MARGIN);
        v_lo = v_lo.max(-v_max);
        v_hi = v_hi.min(v_max);
    }
    if !(x_lo <= x_hi && v_lo <= v_hi) {
        return Err(Error::InvalidParameter(
            "scan ranges must be nonempty and ordered".into(),
        ));
    }

    let step = 1.0 / (n - 1) as f64;
    let mut report = EomReport {
        grid_size: n * n,
        max_abs_residual: 0.0,
        worst_point: (x_lo, v_lo),
        degenerate_points_skipped: 0,
    };
    for i in 0..n {
        let x = x_lo + (x_hi - x_lo) * (i as f64 * step);
        for k in 0..n {
            let v = v_lo + (v_hi - v_lo) * (k as f64 * step);
            let a = match acceleration_from_lagrangian(model, x, v) {
                Ok(a) => a,
                Err(Error::DegenerateHessian { .. }) => {
                    report.degenerate_points_skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let a_ref = reference_acceleration(kind, &model.params, &model.potential, x, v)?;
            let residual = (a - a_ref).abs();
            if residual > report.max_abs_residual {
                report.max_abs_residual = residual;
                report.worst_point = (x, v);
            }
        }
    }
    Ok(report)
}
