use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive, got abs {abs_tol}, rel {rel_tol}"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 60,
        }
    }
}

const GL_POINTS: usize = 15;

/// Legendre polynomial P_n and its derivative at x, by the three-term
/// recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// 15-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on P_15.
fn gl15() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static TABLE: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-15 {
                    let (p, d) = legendre(n, x);
                    dp = d;
                    x -= p / d;
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gl15_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for i in 0..GL_POINTS {
        sum += weights[i] * f(mid + half * nodes[i]);
    }
    sum * half
}

/// Adaptive Gauss-Legendre integration of `f` over [a, b].
///
/// Each segment is bisected until the coarse/fine estimates agree within the
/// segment's share of the total tolerance; exceeding the subdivision budget
/// is an error, never a silent low-accuracy answer.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gl15_segment(&f, a, b);
    let total_len = (b - a).abs();
    let tol_per_len = spec.abs_tol.max(spec.rel_tol * whole.abs()) / total_len;
    refine(&f, a, b, whole, tol_per_len, spec.max_subdivisions, spec)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol_per_len: f64,
    levels_left: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gl15_segment(f, a, mid);
    let right = gl15_segment(f, mid, b);
    let fine = left + right;
    if (fine - whole).abs() <= tol_per_len * (b - a).abs() {
        return Ok(fine);
    }
    if levels_left == 0 {
        return Err(Error::QuadratureDidNotConverge(spec.max_subdivisions));
    }
    Ok(refine(f, a, mid, left, tol_per_len, levels_left - 1, spec)?
        + refine(f, mid, b, right, tol_per_len, levels_left - 1, spec)?)
}
