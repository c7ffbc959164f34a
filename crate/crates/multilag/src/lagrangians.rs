//! The six Lagrangian families, evaluated as scalar functions of (x, v) that
//! propagate `HyperDual` derivatives.
//!
//! Non-relativistic: the additive T - V, the multiplicative lambda-deformed
//! form, and the degree-j kinetic polynomials it generates. Relativistic:
//! the additive -mc^2/gamma - V, the two-parameter multiplicative form, and
//! the hierarchy built from the velocity functions P_j. All six produce the
//! same second-order dynamics, which is what the eom module verifies.

use crate::error::{Error, Result};
use crate::numerics::{
    check_lambda, check_speed, gauss_velocity_integral, gauss_velocity_integral_hd,
    gamma_power_integral, gamma_power_integral_hd, lorentz_gamma, lorentz_gamma_minus_one,
    rel_velocity_integral_hd, rel_velocity_integral_rest_scaled, HyperDual,
};
use crate::potentials::Potential;

/// Hierarchy degrees stay within exact 64-bit rational coefficient range.
pub const MAX_HIERARCHY_DEGREE: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    AdditiveNr,
    MultiplicativeNr,
    HierarchyNr { j: u32 },
    AdditiveRel,
    MultiplicativeRel,
    HierarchyRel { j: u32 },
}

impl Family {
    pub fn is_relativistic(self) -> bool {
        matches!(
            self,
            Family::AdditiveRel | Family::MultiplicativeRel | Family::HierarchyRel { .. }
        )
    }

    pub fn needs_lambda(self) -> bool {
        matches!(self, Family::MultiplicativeNr | Family::MultiplicativeRel)
    }

    pub fn hierarchy_degree(self) -> Option<u32> {
        match self {
            Family::HierarchyNr { j } | Family::HierarchyRel { j } => Some(j),
            _ => None,
        }
    }
}

/// Physical parameters shared by the Lagrangian and Hamiltonian models.
/// `lambda` is the deformation velocity scale of the multiplicative
/// families; `c` is only consulted by the relativistic ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub m: f64,
    pub lambda: Option<f64>,
    pub c: Option<f64>,
}

impl ModelParams {
    pub fn nonrel(m: f64) -> Self {
        Self {
            m,
            lambda: None,
            c: None,
        }
    }

    pub fn multiplicative(m: f64, lambda: f64) -> Self {
        Self {
            m,
            lambda: Some(lambda),
            c: None,
        }
    }

    pub fn relativistic(m: f64, c: f64) -> Self {
        Self {
            m,
            lambda: None,
            c: Some(c),
        }
    }

    pub fn relativistic_multiplicative(m: f64, lambda: f64, c: f64) -> Self {
        Self {
            m,
            lambda: Some(lambda),
            c: Some(c),
        }
    }

    pub(crate) fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::InvalidParameter("this family requires lambda".into()))
    }

    pub(crate) fn c(&self) -> Result<f64> {
        self.c
            .ok_or_else(|| Error::InvalidParameter("relativistic families require c".into()))
    }

    pub(crate) fn validate_for(&self, family: Family) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {}",
                self.m
            )));
        }
        if family.needs_lambda() {
            check_lambda(self.lambda()?)?;
        }
        if family.is_relativistic() {
            let c = self.c()?;
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "c must be positive and finite, got {c}"
                )));
            }
        }
        if let Some(j) = family.hierarchy_degree() {
            if j < 1 {
                return Err(Error::InvalidParameter(
                    "hierarchy degree j must be at least 1".into(),
                ));
            }
            if j > MAX_HIERARCHY_DEGREE {
                return Err(Error::Overflow(format!(
                    "hierarchy degree {j} exceeds the exact-coefficient bound {MAX_HIERARCHY_DEGREE}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianModel {
    pub family: Family,
    pub params: ModelParams,
    pub potential: Potential,
}

impl LagrangianModel {
    pub fn new(family: Family, params: ModelParams, potential: Potential) -> Result<Self> {
        params.validate_for(family)?;
        Ok(Self {
            family,
            params,
            potential,
        })
    }

    pub fn eval(&self, x: f64, v: f64) -> Result<f64> {
        Ok(self
            .eval_hd(HyperDual::constant(x), HyperDual::constant(v))?
            .re)
    }

    /// Evaluate the Lagrangian with whatever derivative seeds the inputs
    /// carry.
    pub fn eval_hd(&self, x: HyperDual, v: HyperDual) -> Result<HyperDual> {
        let m = self.params.m;
        match self.family {
            Family::AdditiveNr => {
                let pv = self.potential.eval_v_hd(x)?;
                Ok(v * v * (0.5 * m) - pv)
            }
            Family::MultiplicativeNr => {
                let lambda = self.params.lambda()?;
                check_lambda(lambda)?;
                let l2 = lambda * lambda;
                let pv = self.potential.eval_v_hd(x)?;
                let kinetic = (-(v * v) / (2.0 * l2)).exp()
                    + v * gauss_velocity_integral_hd(v, lambda)? / l2;
                Ok(kinetic * (-pv / (m * l2)).exp() * (m * l2))
            }
            Family::HierarchyNr { j } => {
                let t = v * v * (0.5 * m);
                let pv = self.potential.eval_v_hd(x)?;
                Ok(kinetic_polynomial_hd(j, t, pv))
            }
            Family::AdditiveRel => {
                let c = self.params.c()?;
                check_speed(v.re, c)?;
                let root = (1.0 - v * v / (c * c)).sqrt();
                let pv = self.potential.eval_v_hd(x)?;
                Ok(-(m * c * c) * root - pv)
            }
            Family::MultiplicativeRel => {
                let lambda = self.params.lambda()?;
                check_lambda(lambda)?;
                let c = self.params.c()?;
                check_speed(v.re, c)?;
                let l2 = lambda * lambda;
                let gamma = (1.0 - v * v / (c * c)).sqrt().recip();
                let pv = self.potential.eval_v_hd(x)?;
                let kinetic = (-gamma * (c * c / l2)).exp()
                    + v * rel_velocity_integral_hd(v, c, lambda)? / l2;
                Ok(kinetic * (-pv / (m * l2)).exp() * (m * l2))
            }
            Family::HierarchyRel { j } => {
                let c = self.params.c()?;
                check_speed(v.re, c)?;
                let pv = self.potential.eval_v_hd(x)?;
                rel_hierarchy_polynomial_hd(j, m, c, v, pv)
            }
        }
    }

    /// The momentum that the matching closed-form Hamiltonian is written in:
    /// m v non-relativistically, gamma m v relativistically.
    pub fn standard_momentum(&self, v: f64) -> Result<f64> {
        let m = self.params.m;
        if self.family.is_relativistic() {
            let c = self.params.c()?;
            Ok(lorentz_gamma(v, c)? * m * v)
        } else {
            Ok(m * v)
        }
    }

    /// dL/dv from the derivative engine.
    pub fn canonical_momentum(&self, x: f64, v: f64) -> Result<f64> {
        Ok(self
            .eval_hd(HyperDual::constant(x), HyperDual::var2(v))?
            .e2)
    }
}

/// Conjugate momentum of the multiplicative non-relativistic Lagrangian in
/// closed form: m e^{-V/(m lambda^2)} times the gaussian velocity integral.
pub fn momentum_mult_nr(params: &ModelParams, pot: &Potential, x: f64, v: f64) -> Result<f64> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let m = params.m;
    let pv = pot.eval_v(x)?;
    Ok(m * gauss_velocity_integral(v, lambda)? * (-pv / (m * lambda * lambda)).exp())
}

/// The degree-j polynomial in (T, V) generated by the multiplicative
/// Lagrangian, with float coefficients built by the stable term-to-term
/// ratio. The exact rational table lives in the hierarchy module; the two
/// code paths are compared in tests.
fn kinetic_polynomial_hd(j: u32, t: HyperDual, v_pot: HyperDual) -> HyperDual {
    let j = j as i64;
    let mut t_pows = Vec::with_capacity(j as usize + 1);
    let mut v_pows = Vec::with_capacity(j as usize + 1);
    t_pows.push(HyperDual::constant(1.0));
    v_pows.push(HyperDual::constant(1.0));
    for i in 1..=j as usize {
        t_pows.push(t_pows[i - 1] * t);
        v_pows.push(v_pows[i - 1] * v_pot);
    }
    let mut coeff = 1.0 / (2 * j - 1) as f64;
    let mut sum = t_pows[j as usize] * coeff;
    for k in 0..j {
        coeff *= ((j - k) * (2 * j - 2 * k - 1)) as f64 / ((k + 1) * (2 * j - 2 * k - 3)) as f64;
        sum = sum + t_pows[(j - k - 1) as usize] * v_pows[(k + 1) as usize] * coeff;
    }
    sum
}

/// P_j(v): gamma^j minus (j v / c^2) times the integral of gamma^{j+2}.
/// The defining integral is the ground truth here; closed forms for low j
/// are verified against it in tests. P_0 is the constant 1.
pub fn p_j(v: f64, c: f64, j: u32) -> Result<f64> {
    if j == 0 {
        check_speed(v, c)?;
        return Ok(1.0);
    }
    let gamma = lorentz_gamma(v, c)?;
    let tail = f64::from(j) * v / (c * c) * gamma_power_integral(v, c, j + 2)?;
    Ok(gamma.powi(j as i32) - tail)
}

fn p_j_hd(v: HyperDual, c: f64, j: u32) -> Result<HyperDual> {
    if j == 0 {
        check_speed(v.re, c)?;
        return Ok(HyperDual::constant(1.0));
    }
    let gamma = (1.0 - v * v / (c * c)).sqrt().recip();
    let tail = v * gamma_power_integral_hd(v, c, j + 2)? * (f64::from(j) / (c * c));
    Ok(gamma.powi(j as i32) - tail)
}

/// Log-form closed-form candidates for P_2 and P_4. They do not reproduce
/// the defining integral; they exist so the verification suite can quantify
/// the mismatch. Only defined for 0 < v < c.
pub fn p2_log_form(v: f64, c: f64) -> Result<f64> {
    let gamma = lorentz_gamma(v, c)?;
    if v <= 0.0 {
        return Err(Error::DomainError("log form needs v > 0".into()));
    }
    Ok(1.0 - v / c * (v * gamma * gamma / c).ln())
}

pub fn p4_log_form(v: f64, c: f64) -> Result<f64> {
    let gamma = lorentz_gamma(v, c)?;
    if v <= 0.0 {
        return Err(Error::DomainError("log form needs v > 0".into()));
    }
    let g2 = gamma * gamma;
    Ok(g2 * (1.0 - 1.5 * v * v / (c * c)) - 1.5 * v / c * (v * g2 / c).ln())
}

/// -sum_k C(j,k) (mc^2)^{j-k} P_{j-k}(v) V^k, the degree-j member of the
/// relativistic family.
fn rel_hierarchy_polynomial_hd(
    j: u32,
    m: f64,
    c: f64,
    v: HyperDual,
    v_pot: HyperDual,
) -> Result<HyperDual> {
    let rest = m * c * c;
    let mut p_vals = Vec::with_capacity(j as usize + 1);
    for i in 0..=j {
        p_vals.push(p_j_hd(v, c, i)?);
    }
    let mut v_pow = HyperDual::constant(1.0);
    let mut binom = 1.0;
    let mut rest_pow = rest.powi(j as i32);
    let mut sum = HyperDual::constant(0.0);
    for k in 0..=j {
        sum = sum + p_vals[(j - k) as usize] * v_pow * (binom * rest_pow);
        if k < j {
            binom *= f64::from(j - k) / f64::from(k + 1);
            rest_pow /= rest;
            v_pow = v_pow * v_pot;
        }
    }
    Ok(-sum)
}

/// Multiplicative relativistic Lagrangian with the rest-energy attenuation
/// e^{-c^2/lambda^2} divided out, so the non-relativistic limit can be
/// compared at large c without underflow.
pub fn l_mult_rel_rest_scaled(
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    v: f64,
) -> Result<f64> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let c = params.c()?;
    let m = params.m;
    let l2 = lambda * lambda;
    let gm1 = lorentz_gamma_minus_one(v, c)?;
    let pv = pot.eval_v(x)?;
    let kinetic = (-gm1 * c * c / l2).exp() + v / l2 * rel_velocity_integral_rest_scaled(v, c, lambda)?;
    Ok(m * l2 * kinetic * (-pv / (m * l2)).exp())
}
