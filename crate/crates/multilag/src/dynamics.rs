//! Trajectory integration for both formulations.
//!
//! Lagrangian runs integrate the second-order system (x, v) with the
//! acceleration extracted from the Euler-Lagrange identity; Hamiltonian runs
//! integrate Hamilton's equations in (x, p). Every recorded point carries the
//! state in both charts (the missing coordinate comes from the standard
//! momentum map or dH/dp) plus the additive energy and the model's own
//! conserved value, so runs from different families and formulations can be
//! compared column against column.

use crate::eom::{acceleration_from_lagrangian, hamilton_rhs};
use crate::error::{Error, Result};
use crate::hamiltonians::{legendre_numeric, HamiltonianModel};
use crate::lagrangians::{Family, LagrangianModel};
use crate::numerics::HyperDual;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    Lagrangian,
    Hamiltonian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub p: f64,
    pub h_std: f64,
    pub h_model: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub formulation: Formulation,
    pub family: Family,
    pub step: f64,
    pub points: Vec<TrajectoryPoint>,
    /// Set when the run stopped early (degenerate Hessian, domain exit, or
    /// adaptive step underflow); `points` then holds the completed prefix.
    pub abort: Option<Error>,
}

impl Trajectory {
    pub fn kin_states(&self) -> Vec<KinState> {
        self.points
            .iter()
            .map(|q| KinState {
                t: q.t,
                x: q.x,
                v: q.v,
            })
            .collect()
    }

    pub fn phase_states(&self) -> Vec<PhaseState> {
        self.points
            .iter()
            .map(|q| PhaseState {
                t: q.t,
                x: q.x,
                p: q.p,
            })
            .collect()
    }

    /// The (t, H_model) column whose flatness conserved_drift measures.
    pub fn conserved(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|q| (q.t, q.h_model)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub dt: f64,
    pub n_steps: usize,
    pub method: Method,
    /// Record every `stride`-th step (the initial and final states are always
    /// kept).
    pub stride: usize,
}

impl RunSpec {
    pub fn new(dt: f64, n_steps: usize, method: Method) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size must be positive and finite, got {dt}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
        }
        Ok(Self {
            dt,
            n_steps,
            method,
            stride: 1,
        })
    }

    pub fn with_stride(mut self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::InvalidParameter("stride must be at least 1".into()));
        }
        self.stride = stride;
        Ok(self)
    }
}

/// Relative and absolute local error tolerance for the adaptive method.
const RK45_TOL: f64 = 1e-10;

/// DEGENERATE_ENERGY_FLOOR guards hierarchy Hamiltonian runs: for j >= 2
/// every component of the vector field carries j H^{j-1}, so a run started
/// at H = 0 never moves.
const DEGENERATE_ENERGY_FLOOR: f64 = 1e-8;

pub fn integrate_lagrangian(
    model: &LagrangianModel,
    x0: f64,
    v0: f64,
    spec: &RunSpec,
) -> Result<Trajectory> {
    // surface bad initial data as a hard error, not an aborted run
    acceleration_from_lagrangian(model, x0, v0)?;
    let record = |x: f64, v: f64, t: f64| -> Result<TrajectoryPoint> {
        Ok(TrajectoryPoint {
            t,
            x,
            v,
            p: model.standard_momentum(v)?,
            h_std: standard_energy_lagrangian(model, x, v)?,
            h_model: legendre_numeric(model, x, v)?,
        })
    };
    let deriv = |y: &[f64; 2]| -> Result<[f64; 2]> {
        Ok([y[1], acceleration_from_lagrangian(model, y[0], y[1])?])
    };
    drive(
        [x0, v0],
        spec,
        Formulation::Lagrangian,
        model.family,
        record,
        deriv,
    )
}

pub fn integrate_hamiltonian(
    model: &HamiltonianModel,
    x0: f64,
    p0: f64,
    spec: &RunSpec,
) -> Result<Trajectory> {
    if let Family::HierarchyNr { j } | Family::HierarchyRel { j } = model.family {
        if j >= 2 {
            let h0 = model.additive_base(x0, p0)?;
            if h0.abs() <= DEGENERATE_ENERGY_FLOOR {
                return Err(Error::DegenerateEnergy(h0));
            }
        }
    }
    hamilton_rhs(model, x0, p0)?;
    let record = |x: f64, p: f64, t: f64| -> Result<TrajectoryPoint> {
        let out = model.eval_hd(HyperDual::constant(x), HyperDual::var2(p))?;
        Ok(TrajectoryPoint {
            t,
            x,
            v: out.e2,
            p,
            h_std: model.additive_base(x, p)?,
            h_model: out.re,
        })
    };
    let deriv = |y: &[f64; 2]| -> Result<[f64; 2]> {
        let (dx, dp) = hamilton_rhs(model, y[0], y[1])?;
        Ok([dx, dp])
    };
    drive(
        [x0, p0],
        spec,
        Formulation::Hamiltonian,
        model.family,
        record,
        deriv,
    )
}

fn standard_energy_lagrangian(model: &LagrangianModel, x: f64, v: f64) -> Result<f64> {
    let m = model.params.m;
    let pv = model.potential.eval_v(x)?;
    if model.family.is_relativistic() {
        let c = model.params.c()?;
        let gamma = 1.0 / (1.0 - v * v / (c * c)).sqrt();
        Ok(gamma * m * c * c + pv)
    } else {
        Ok(0.5 * m * v * v + pv)
    }
}

fn drive<R, D>(
    y0: [f64; 2],
    spec: &RunSpec,
    formulation: Formulation,
    family: Family,
    record: R,
    deriv: D,
) -> Result<Trajectory>
where
    R: Fn(f64, f64, f64) -> Result<TrajectoryPoint>,
    D: Fn(&[f64; 2]) -> Result<[f64; 2]>,
{
    let mut traj = Trajectory {
        formulation,
        family,
        step: spec.dt,
        points: Vec::with_capacity(spec.n_steps / spec.stride + 2),
        abort: None,
    };
    traj.points.push(record(y0[0], y0[1], 0.0)?);

    let mut y = y0;
    let mut completed = 0usize;
    let mut recorded = 0usize;
    for i in 1..=spec.n_steps {
        let stepped = match spec.method {
            Method::Rk4 => rk4_step(&deriv, y, spec.dt),
            Method::Rk45 => rk45_interval(&deriv, y, spec.dt),
        };
        match stepped {
            Ok(next) if next[0].is_finite() && next[1].is_finite() => y = next,
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
            match record(y[0], y[1], i as f64 * spec.dt) {
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
    // an abort between stride points leaves the last completed state
    // unrecorded; flush it so the trajectory ends where the run did
    if traj.abort.is_some() && completed > recorded {
        if let Ok(point) = record(y[0], y[1], completed as f64 * spec.dt) {
            traj.points.push(point);
        }
    }
    Ok(traj)
}

pub(crate) fn rk4_step<D, const N: usize>(deriv: &D, y: [f64; N], h: f64) -> Result<[f64; N]>
where
    D: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    fn at<const N: usize>(y: [f64; N], h: f64, k: &[f64; N], c: f64) -> [f64; N] {
        let mut out = y;
        for i in 0..N {
            out[i] += h * c * k[i];
        }
        out
    }
    let k1 = deriv(&y)?;
    let k2 = deriv(&at(y, h, &k1, 0.5))?;
    let k3 = deriv(&at(y, h, &k2, 0.5))?;
    let k4 = deriv(&at(y, h, &k3, 1.0))?;
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Advance one output interval of length dt with embedded Dormand-Prince 5(4)
/// steps, local tolerance RK45_TOL.
pub(crate) fn rk45_interval<D, const N: usize>(
    deriv: &D,
    mut y: [f64; N],
    dt: f64,
) -> Result<[f64; N]>
where
    D: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let mut remaining = dt;
    let mut h = dt;
    let h_floor = dt * 1e-12;
    while remaining > 0.0 {
        if h > remaining {
            h = remaining;
        }
        if h < h_floor {
            return Err(Error::DomainError(format!(
                "adaptive step size underflowed ({h:.3e} of an interval {dt:.3e})"
            )));
        }
        let (y_new, err) = dp_step(deriv, y, h)?;
        let mut magnitude = 0.0f64;
        for i in 0..N {
            magnitude = magnitude.max(y[i].abs()).max(y_new[i].abs());
        }
        let err_ratio = err / (RK45_TOL + RK45_TOL * magnitude);
        if err_ratio <= 1.0 {
            y = y_new;
            remaining -= h;
        }
        let shrink = if err_ratio > 0.0 {
            0.9 * err_ratio.powf(-0.2)
        } else {
            5.0
        };
        h *= shrink.clamp(0.2, 5.0);
    }
    Ok(y)
}

fn dp_step<D, const N: usize>(deriv: &D, y: [f64; N], h: f64) -> Result<([f64; N], f64)>
where
    D: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    fn at<const N: usize>(y: [f64; N], h: f64, ks: &[[f64; N]], coeffs: &[f64]) -> [f64; N] {
        let mut out = y;
        for (k, c) in ks.iter().zip(coeffs) {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
        out
    }
    let k1 = deriv(&y)?;
    let k2 = deriv(&at(y, h, &[k1], &[1.0 / 5.0]))?;
    let k3 = deriv(&at(y, h, &[k1, k2], &[3.0 / 40.0, 9.0 / 40.0]))?;
    let k4 = deriv(&at(y, h, &[k1, k2, k3], &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]))?;
    let k5 = deriv(&at(
        y,
        h,
        &[k1, k2, k3, k4],
        &[
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
        ],
    ))?;
    let k6 = deriv(&at(
        y,
        h,
        &[k1, k2, k3, k4, k5],
        &[
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
        ],
    ))?;
    let b5 = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ];
    let y5 = at(y, h, &[k1, k2, k3, k4, k5, k6], &b5);
    let k7 = deriv(&y5)?;
    // fifth-order minus fourth-order weights
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err_sq = 0.0f64;
    for i in 0..N {
        let mut ei = 0.0;
        for (k, c) in ks.iter().zip(&e) {
            ei += h * c * k[i];
        }
        err_sq += ei * ei;
    }
    Ok((y5, err_sq.sqrt()))
}

/// Worst relative excursion of the model's conserved value over the run.
pub fn conserved_drift(traj: &Trajectory) -> f64 {
    let mut it = traj.points.iter();
    let h0 = match it.next() {
        Some(q) => q.h_model,
        None => return 0.0,
    };
    let denom = h0.abs().max(1e-300);
    it.map(|q| (q.h_model - h0).abs() / denom)
        .fold(0.0, f64::max)
}

/// Componentwise sup-norm deviation between two runs on the same time grid:
/// (x column, then p if both runs are Hamiltonian, else v).
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<(f64, f64)> {
    if a.points.len() != b.points.len() {
        return Err(Error::GridMismatch);
    }
    if a.points
        .iter()
        .zip(&b.points)
        .any(|(qa, qb)| qa.t != qb.t)
    {
        return Err(Error::GridMismatch);
    }
    let both_hamiltonian =
        a.formulation == Formulation::Hamiltonian && b.formulation == Formulation::Hamiltonian;
    let mut dev_x = 0.0f64;
    let mut dev_s = 0.0f64;
    for (qa, qb) in a.points.iter().zip(&b.points) {
        dev_x = dev_x.max((qa.x - qb.x).abs());
        let (sa, sb) = if both_hamiltonian {
            (qa.p, qb.p)
        } else {
            (qa.v, qb.v)
        };
        dev_s = dev_s.max((sa - sb).abs());
    }
    Ok((dev_x, dev_s))
}
