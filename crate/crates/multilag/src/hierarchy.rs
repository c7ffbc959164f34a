//! Hierarchy coefficient tables, recurrence checks, and series
//! reconstruction of the multiplicative forms from their hierarchy members.
//!
//! The non-relativistic member of degree j is the (T, V) polynomial
//! sum_k c_{j,k} T^{j-k} V^k with c_{j,k} = j! / ((j-k)! k! (2j-2k-1)),
//! kept as exact 64-bit rationals. Summing the members with weights
//! (1/j!)(-1/(m lambda^2))^{j-1} reproduces the multiplicative Lagrangian;
//! the analogous Hamiltonian sum is a plain exponential series.

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianModel;
use crate::lagrangians::{Family, LagrangianModel, ModelParams, MAX_HIERARCHY_DEGREE};
use crate::numerics::check_lambda;
use crate::potentials::Potential;
use num_rational::Ratio;

/// Exact coefficients c_{j,k} for k = 0..=j.
///
/// The k = j entry is always -1 and the lead entry is 1/(2j-1); the interior
/// denominators 2j-2k-1 run through the odd numbers down to -1.
pub fn hier_coefficients_nr(j: u32) -> Result<Vec<Ratio<i64>>> {
    if j == 0 || j > MAX_HIERARCHY_DEGREE {
        return Err(Error::Overflow(format!(
            "hierarchy degree {j} outside 1..={MAX_HIERARCHY_DEGREE} (exact in 64-bit rationals)"
        )));
    }
    let mut coeffs = Vec::with_capacity(j as usize + 1);
    let mut binom: i64 = 1;
    for k in 0..=i64::from(j) {
        let denom = 2 * (i64::from(j) - k) - 1;
        coeffs.push(Ratio::new(binom, denom));
        if k < i64::from(j) {
            binom = binom * (i64::from(j) - k) / (k + 1);
        }
    }
    Ok(coeffs)
}

/// Evaluate the degree-j member as a float polynomial in (T, V) straight from
/// the exact table. This is deliberately a different code path from
/// `LagrangianModel` so the two can be cross-checked.
pub fn eval_member_nr(j: u32, t: f64, v: f64) -> Result<f64> {
    let coeffs = hier_coefficients_nr(j)?;
    let mut sum = 0.0;
    for (k, c) in coeffs.iter().enumerate() {
        let cf = *c.numer() as f64 / *c.denom() as f64;
        sum += cf * t.powi(j as i32 - k as i32) * v.powi(k as i32);
    }
    Ok(sum)
}

/// Verify the derivative recurrence member_{j-1} = (1/j) d member_j / dV and
/// its (j-1)-fold iterate down to member_1 = T - V.
///
/// The single step is evaluated in floats over the supplied (T, V) samples
/// against the exact table of degree j-1; the full iterate is compared at the
/// rational-coefficient level, where it must cancel exactly. Returns the
/// maximum relative deviation seen.
pub fn recurrence_check_nr(j: u32, samples: &[(f64, f64)]) -> Result<f64> {
    if j < 2 {
        return Err(Error::InvalidParameter(format!(
            "recurrence check needs degree at least 2, got {j}"
        )));
    }
    let coeffs = hier_coefficients_nr(j)?;
    let lower = hier_coefficients_nr(j - 1)?;

    // (j-1)-fold V-derivative keeps only the k = j-1 and k = j terms:
    // (1/j!) d^{j-1}/dV^{j-1} = (c_{j,j-1}/j) T + c_{j,j} V, which must be
    // the exact degree-1 table [1, -1]
    let jr = Ratio::from_integer(i64::from(j));
    let iterated = [coeffs[j as usize - 1] / jr, coeffs[j as usize]];
    let base = hier_coefficients_nr(1)?;
    let mut max_dev: f64 = if iterated[0] == base[0] && iterated[1] == base[1] {
        0.0
    } else {
        f64::INFINITY
    };

    for &(t, v) in samples {
        // d/dV shifts k down by one and scales by k
        let mut deriv = 0.0;
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            let cf = *c.numer() as f64 / *c.denom() as f64;
            deriv += cf * k as f64 * t.powi(j as i32 - k as i32) * v.powi(k as i32 - 1);
        }
        let lhs = deriv / f64::from(j);
        let mut rhs = 0.0;
        for (k, c) in lower.iter().enumerate() {
            let cf = *c.numer() as f64 / *c.denom() as f64;
            rhs += cf * t.powi(j as i32 - 1 - k as i32) * v.powi(k as i32);
        }
        let dev = (lhs - rhs).abs() / rhs.abs().max(1.0);
        max_dev = max_dev.max(dev);
    }
    Ok(max_dev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCheck {
    pub partial_sum: f64,
    pub target: f64,
    pub residual: f64,
}

impl SeriesCheck {
    fn new(partial_sum: f64, target: f64) -> Self {
        Self {
            partial_sum,
            target,
            residual: (partial_sum - target).abs(),
        }
    }

    pub fn rel_residual(&self) -> f64 {
        self.residual / self.target.abs().max(1e-300)
    }
}

/// Partial sums sum_{j=0}^{J} (1/j!)(-1/(m lambda^2))^{j-1} member_j against
/// the closed multiplicative Lagrangian; the j = 0 term is m lambda^2.
pub fn series_reconstruct_nr(
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    v: f64,
    j_max: u32,
) -> Result<SeriesCheck> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let ml2 = params.m * lambda * lambda;
    let t = 0.5 * params.m * v * v;
    let pv = pot.eval_v(x)?;

    let mut sum = ml2;
    let mut weight = 1.0;
    for j in 1..=j_max {
        sum += weight * eval_member_nr(j, t, pv)?;
        weight *= -1.0 / (ml2 * f64::from(j + 1));
    }
    let target = LagrangianModel::new(Family::MultiplicativeNr, *params, pot.clone())?
        .eval(x, v)?;
    Ok(SeriesCheck::new(sum, target))
}

/// Relativistic analogue: the members come from the model evaluator (their
/// velocity integrals have no elementary closed form), the target is the
/// closed multiplicative relativistic Lagrangian.
pub fn series_reconstruct_rel(
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    v: f64,
    j_max: u32,
) -> Result<SeriesCheck> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let ml2 = params.m * lambda * lambda;

    let mut sum = ml2;
    let mut weight = 1.0;
    for j in 1..=j_max {
        let member = LagrangianModel::new(Family::HierarchyRel { j }, *params, pot.clone())?
            .eval(x, v)?;
        sum += weight * member;
        weight *= -1.0 / (ml2 * f64::from(j + 1));
    }
    let target = LagrangianModel::new(Family::MultiplicativeRel, *params, pot.clone())?
        .eval(x, v)?;
    Ok(SeriesCheck::new(sum, target))
}

/// Partial sums of the Hamiltonian series, which is the plain exponential
/// series of -m lambda^2 e^{-H/(m lambda^2)} in the additive energy H; the
/// j = 0 term is -m lambda^2. Entire, so no degree cap applies.
pub fn hamiltonian_series(
    params: &ModelParams,
    pot: &Potential,
    x: f64,
    p: f64,
    j_max: u32,
    relativistic: bool,
) -> Result<SeriesCheck> {
    let lambda = params.lambda()?;
    check_lambda(lambda)?;
    let ml2 = params.m * lambda * lambda;
    let base_family = if relativistic {
        Family::AdditiveRel
    } else {
        Family::AdditiveNr
    };
    let base = HamiltonianModel::new(base_family, *params, pot.clone())?.eval(x, p)?;

    // -ml2 sum_j (-base/ml2)^j / j!
    let mut term = -ml2;
    let mut sum = term;
    for j in 1..=j_max {
        term *= -base / (ml2 * f64::from(j));
        sum += term;
    }
    let target = -ml2 * (-base / ml2).exp();
    Ok(SeriesCheck::new(sum, target))
}
