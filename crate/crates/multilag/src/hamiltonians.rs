//! Closed-form Hamiltonian families, the numeric Legendre transform, and the
//! harmonic-oscillator Lax invariant check.
//!
//! Every non-additive family is a function of the additive Hamiltonian alone:
//! the multiplicative forms are -m lambda^2 e^{-H/(m lambda^2)} and the
//! hierarchy members are plain powers H^j. That structure is what makes their
//! Hamiltonian flows trace the same orbits as the additive one, up to a
//! conserved time scale (see `flow_time_scale`).

use crate::error::Result;
use crate::lagrangians::{Family, LagrangianModel, ModelParams};
use crate::numerics::{check_lambda, HyperDual};
use crate::potentials::Potential;

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianModel {
    pub family: Family,
    pub params: ModelParams,
    pub potential: Potential,
}

impl HamiltonianModel {
    pub fn new(family: Family, params: ModelParams, potential: Potential) -> Result<Self> {
        params.validate_for(family)?;
        Ok(Self {
            family,
            params,
            potential,
        })
    }

    pub fn eval(&self, x: f64, p: f64) -> Result<f64> {
        Ok(self
            .eval_hd(HyperDual::constant(x), HyperDual::constant(p))?
            .re)
    }

    /// The additive Hamiltonian this family is built from: T(p) + V(x) in the
    /// non-relativistic sector, gamma m c^2 + V(x) in the relativistic one.
    pub fn additive_base_hd(&self, x: HyperDual, p: HyperDual) -> Result<HyperDual> {
        let m = self.params.m;
        let pv = self.potential.eval_v_hd(x)?;
        if self.family.is_relativistic() {
            let c = self.params.c()?;
            let mc = m * c;
            Ok((1.0 + (p / mc) * (p / mc)).sqrt() * (mc * c) + pv)
        } else {
            Ok(p * p / (2.0 * m) + pv)
        }
    }

    pub fn additive_base(&self, x: f64, p: f64) -> Result<f64> {
        Ok(self
            .additive_base_hd(HyperDual::constant(x), HyperDual::constant(p))?
            .re)
    }

    pub fn eval_hd(&self, x: HyperDual, p: HyperDual) -> Result<HyperDual> {
        let base = self.additive_base_hd(x, p)?;
        match self.family {
            Family::AdditiveNr | Family::AdditiveRel => Ok(base),
            Family::MultiplicativeNr | Family::MultiplicativeRel => {
                let lambda = self.params.lambda()?;
                check_lambda(lambda)?;
                let ml2 = self.params.m * lambda * lambda;
                Ok((-base / ml2).exp() * (-ml2))
            }
            Family::HierarchyNr { j } | Family::HierarchyRel { j } => Ok(base.powi(j as i32)),
        }
    }

    /// Ratio between this family's Hamiltonian vector field and the additive
    /// one at the same phase point. It is a function of the conserved additive
    /// energy only, hence itself conserved along the flow: the model's orbit
    /// is the additive orbit traversed at `flow_time_scale` times the rate.
    pub fn flow_time_scale(&self, x: f64, p: f64) -> Result<f64> {
        let base = self.additive_base(x, p)?;
        Ok(match self.family {
            Family::AdditiveNr | Family::AdditiveRel => 1.0,
            Family::MultiplicativeNr | Family::MultiplicativeRel => {
                let ml2 = self.params.m * self.params.lambda()? * self.params.lambda()?;
                (-base / ml2).exp()
            }
            Family::HierarchyNr { j } | Family::HierarchyRel { j } => {
                f64::from(j) * base.powi(j as i32 - 1)
            }
        })
    }
}

/// Legendre value v dL/dv - L computed through the derivative engine.
///
/// For each Lagrangian family this equals the matching closed-form
/// Hamiltonian evaluated at the standard momentum m v (resp. gamma m v); the
/// additive families are the special case where that momentum is also dL/dv.
pub fn legendre_numeric(model: &LagrangianModel, x: f64, v: f64) -> Result<f64> {
    let out = model.eval_hd(HyperDual::constant(x), HyperDual::var2(v))?;
    Ok(v * out.e2 - out.re)
}

/// Multiplicative relativistic Hamiltonian with the rest-energy attenuation
/// e^{-c^2/lambda^2} divided out; the large-c companions of the Lagrangian
/// side's rest-scaled form.
pub fn h_mult_rel_rest_scaled(
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    p: f64,
) -> Result<f64> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let c = params.c()?;
    let m = params.m;
    let ml2 = m * lambda * lambda;
    let r = p / (m * c);
    // gamma(p) - 1 without cancellation
    let gm1 = r * r / ((1.0 + r * r).sqrt() + 1.0);
    let pv = pot.eval_v(x)?;
    Ok(-ml2 * (-gm1 * c * c / (lambda * lambda)).exp() * (-pv / ml2).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxCheck {
    pub trace: f64,
    pub expected: f64,
    pub odd_trace: f64,
}

/// Trace identities of the 2x2 harmonic-oscillator Lax matrix
/// [[p, omega x], [omega x, -p]] at unit mass: even powers have trace
/// 2 (p^2 + omega^2 x^2)^l, odd powers are traceless.
pub fn lax_invariant_check(omega: f64, x: f64, p: f64, l: u32) -> LaxCheck {
    let w = omega * x;
    let base = [[p, w], [w, -p]];
    let mut even = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..2 * l {
        even = mat2_mul(even, base);
    }
    let odd = mat2_mul(even, base);
    LaxCheck {
        trace: even[0][0] + even[1][1],
        expected: 2.0 * (p * p + w * w).powi(l as i32),
        odd_trace: odd[0][0] + odd[1][1],
    }
}

fn mat2_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}
