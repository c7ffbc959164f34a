//! Two identical particles on a line, in sum and difference coordinates
//! X = x1 + x2, x = x1 - x2.
//!
//! The multiplicative Lagrangian splits into a free factor in X-dot and a
//! barrier-weighted factor in (x-dot, x); the barrier carries the doubled
//! exponent e^{-2V/(m lambda^2)} in both the Lagrangian and the Hamiltonian,
//! which is what makes the large-lambda limits land on the additive forms and
//! the relative sector reproduce x-double-dot = -(2/m) V'(x). Because the
//! coordinates are sums rather than averages, the canonical equations carry a
//! factor 2: z-dot = 2 J grad H.

use crate::dynamics::{rk4_step, rk45_interval, Method, RunSpec};
use crate::eom::{EomReport, HESSIAN_FLOOR_SCALE};
use crate::error::{Error, Result};
use crate::lagrangians::{Family, ModelParams};
use crate::numerics::{eval_with_second_derivs, gauss_velocity_integral_hd, HyperDual};
use crate::potentials::Potential;

fn check_params(params: &ModelParams) -> Result<()> {
    params.validate_for(Family::MultiplicativeNr)
}

/// One velocity factor of the two-body Lagrangian:
/// f(u) = e^{-u^2/(2 lambda^2)} + (u/lambda^2) * integral of the Gaussian.
fn velocity_factor_hd(u: HyperDual, lambda: f64) -> Result<HyperDual> {
    let l2 = lambda * lambda;
    Ok((-(u * u) / (2.0 * l2)).exp() + u * gauss_velocity_integral_hd(u, lambda)? / l2)
}

pub fn l2_mult_hd(
    params: &ModelParams,
    pair_pot: &Potential,
    v_sum: HyperDual,
    v_rel: HyperDual,
    x_rel: HyperDual,
) -> Result<HyperDual> {
    check_params(params)?;
    let lambda = params.lambda()?;
    let ml2 = params.m * lambda * lambda;
    let pv = pair_pot.eval_v_hd(x_rel)?;
    let barrier = (pv * (-2.0 / ml2)).exp();
    let sum_part = velocity_factor_hd(v_sum, lambda)?;
    let rel_part = velocity_factor_hd(v_rel, lambda)?;
    Ok((sum_part + rel_part * barrier) * (0.5 * ml2))
}

pub fn l2_mult(
    params: &ModelParams,
    pair_pot: &Potential,
    v_sum: f64,
    v_rel: f64,
    x_rel: f64,
) -> Result<f64> {
    Ok(l2_mult_hd(
        params,
        pair_pot,
        HyperDual::constant(v_sum),
        HyperDual::constant(v_rel),
        HyperDual::constant(x_rel),
    )?
    .re)
}

pub fn h2_mult_hd(
    params: &ModelParams,
    pair_pot: &Potential,
    p_sum: HyperDual,
    p_rel: HyperDual,
    x_rel: HyperDual,
) -> Result<HyperDual> {
    check_params(params)?;
    let lambda = params.lambda()?;
    let m = params.m;
    let ml2 = m * lambda * lambda;
    let two_m2l2 = 2.0 * m * m * lambda * lambda;
    let pv = pair_pot.eval_v_hd(x_rel)?;
    let barrier = (pv * (-2.0 / ml2)).exp();
    let sum_part = (-(p_sum * p_sum) / two_m2l2).exp();
    let rel_part = (-(p_rel * p_rel) / two_m2l2).exp();
    Ok((sum_part + rel_part * barrier) * (-0.5 * ml2))
}

pub fn h2_mult(
    params: &ModelParams,
    pair_pot: &Potential,
    p_sum: f64,
    p_rel: f64,
    x_rel: f64,
) -> Result<f64> {
    Ok(h2_mult_hd(
        params,
        pair_pot,
        HyperDual::constant(p_sum),
        HyperDual::constant(p_rel),
        HyperDual::constant(x_rel),
    )?
    .re)
}

/// Euler-Lagrange scan of both sectors over an n x n (x, velocity) grid.
///
/// Returns (sum-sector report, relative-sector report): the sum sector's
/// extracted acceleration is measured against 0, the relative sector's
/// against -(2/m) V'(x). Both velocities are set to the grid velocity at each
/// point. Degenerate-Hessian points (deep barrier) are skipped and counted.
pub fn twobody_eom_check(
    params: &ModelParams,
    pair_pot: &Potential,
    x_range: (f64, f64),
    v_range: (f64, f64),
    n: usize,
) -> Result<(EomReport, EomReport)> {
    check_params(params)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "scan grid needs at least 2 points per axis, got {n}"
        )));
    }
    let (x_lo, x_hi) = x_range;
    let (v_lo, v_hi) = v_range;
    if !(x_lo <= x_hi && v_lo <= v_hi) {
        return Err(Error::InvalidParameter(
            "scan ranges must be nonempty and ordered".into(),
        ));
    }
    let floor = HESSIAN_FLOOR_SCALE * params.m;
    let mut reports = [
        EomReport {
            grid_size: n * n,
            max_abs_residual: 0.0,
            worst_point: (x_lo, v_lo),
            degenerate_points_skipped: 0,
        },
        EomReport {
            grid_size: n * n,
            max_abs_residual: 0.0,
            worst_point: (x_lo, v_lo),
            degenerate_points_skipped: 0,
        },
    ];
    let step = 1.0 / (n - 1) as f64;
    for i in 0..n {
        let x = x_lo + (x_hi - x_lo) * (i as f64 * step);
        for k in 0..n {
            let v = v_lo + (v_hi - v_lo) * (k as f64 * step);
            // sum sector: vary (X, X-dot) at fixed relative state
            let sum_parts = eval_with_second_derivs(
                |_xh, vh| {
                    l2_mult_hd(
                        params,
                        pair_pot,
                        vh,
                        HyperDual::constant(v),
                        HyperDual::constant(x),
                    )
                },
                0.0,
                v,
            )?;
            // relative sector: vary (x, x-dot) at fixed sum velocity
            let rel_parts = eval_with_second_derivs(
                |xh, vh| l2_mult_hd(params, pair_pot, HyperDual::constant(v), vh, xh),
                x,
                v,
            )?;
            let targets = [
                0.0,
                -2.0 * pair_pot.eval_dv(x)? / params.m,
            ];
            for (sector, parts) in [sum_parts, rel_parts].iter().enumerate() {
                let report = &mut reports[sector];
                if parts.d_vv.abs() < floor {
                    report.degenerate_points_skipped += 1;
                    continue;
                }
                let a = (parts.d_x - v * parts.d_xv) / parts.d_vv;
                let residual = (a - targets[sector]).abs();
                if residual > report.max_abs_residual {
                    report.max_abs_residual = residual;
                    report.worst_point = (x, v);
                }
            }
        }
    }
    let [sum_report, rel_report] = reports;
    Ok((sum_report, rel_report))
}

/// One recorded state of a two-body run, in both charts: positions, the
/// velocities the Hamiltonian flow actually produces, the momenta, and the
/// conserved H value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyState {
    pub t: f64,
    pub x_sum: f64,
    pub x_rel: f64,
    pub v_sum: f64,
    pub v_rel: f64,
    pub p_sum: f64,
    pub p_rel: f64,
    pub h_model: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyTrajectory {
    pub step: f64,
    pub points: Vec<TwoBodyState>,
    pub abort: Option<Error>,
}

/// dz/dt = 2 J grad H for z = (X, x, P, p); the factor 2 comes from the
/// sum/difference coordinates carrying half the canonical symplectic form.
fn twobody_rhs(
    params: &ModelParams,
    pair_pot: &Potential,
    z: &[f64; 4],
) -> Result<[f64; 4]> {
    let momenta = h2_mult_hd(
        params,
        pair_pot,
        HyperDual::var1(z[2]),
        HyperDual::var2(z[3]),
        HyperDual::constant(z[1]),
    )?;
    let position = h2_mult_hd(
        params,
        pair_pot,
        HyperDual::constant(z[2]),
        HyperDual::constant(z[3]),
        HyperDual::var1(z[1]),
    )?;
    // dP/dt = -2 dH/dX vanishes identically: H never sees X
    Ok([2.0 * momenta.e1, 2.0 * momenta.e2, 0.0, -2.0 * position.e1])
}

pub fn integrate_twobody_hamiltonian(
    params: &ModelParams,
    pair_pot: &Potential,
    x_sum0: f64,
    x_rel0: f64,
    p_sum0: f64,
    p_rel0: f64,
    spec: &RunSpec,
) -> Result<TwoBodyTrajectory> {
    check_params(params)?;
    let record = |z: &[f64; 4], t: f64| -> Result<TwoBodyState> {
        let out = h2_mult_hd(
            params,
            pair_pot,
            HyperDual::var1(z[2]),
            HyperDual::var2(z[3]),
            HyperDual::constant(z[1]),
        )?;
        Ok(TwoBodyState {
            t,
            x_sum: z[0],
            x_rel: z[1],
            v_sum: 2.0 * out.e1,
            v_rel: 2.0 * out.e2,
            p_sum: z[2],
            p_rel: z[3],
            h_model: out.re,
        })
    };
    let deriv = |z: &[f64; 4]| twobody_rhs(params, pair_pot, z);

    let mut traj = TwoBodyTrajectory {
        step: spec.dt,
        points: Vec::with_capacity(spec.n_steps / spec.stride + 2),
        abort: None,
    };
    let mut z = [x_sum0, x_rel0, p_sum0, p_rel0];
    traj.points.push(record(&z, 0.0)?);
    let mut completed = 0usize;
    let mut recorded = 0usize;
    for i in 1..=spec.n_steps {
        let stepped = match spec.method {
            Method::Rk4 => rk4_step(&deriv, z, spec.dt),
            Method::Rk45 => rk45_interval(&deriv, z, spec.dt),
        };
        match stepped {
            Ok(next) if next.iter().all(|c| c.is_finite()) => z = next,
            Ok(_) => {
                traj.abort = Some(Error::DomainError(format!(
                    "state became non-finite during step {i}"
                )));
                break;
            }
            Err(e) => {
                traj.abort = Some(e);
                break;
            }
        }
        completed = i;
        if i % spec.stride == 0 || i == spec.n_steps {
            match record(&z, i as f64 * spec.dt) {
                Ok(point) => {
                    traj.points.push(point);
                    recorded = i;
                }
                Err(e) => {
                    traj.abort = Some(e);
                    break;
                }
            }
        }
    }
    if traj.abort.is_some() && completed > recorded {
        if let Ok(point) = record(&z, completed as f64 * spec.dt) {
            traj.points.push(point);
        }
    }
    Ok(traj)
}

/// Worst absolute excursion of the total momentum over the run.
pub fn p_sum_drift(traj: &TwoBodyTrajectory) -> f64 {
    let mut it = traj.points.iter();
    let p0 = match it.next() {
        Some(q) => q.p_sum,
        None => return 0.0,
    };
    it.map(|q| (q.p_sum - p0).abs()).fold(0.0, f64::max)
}
