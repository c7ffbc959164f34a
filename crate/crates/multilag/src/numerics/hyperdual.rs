use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar carrying exact first and second partial derivatives with respect
/// to two independent variables.
///
/// `e1`/`e2` are the first partials, `e11`/`e22` the pure second partials and
/// `e12` the mixed one. Seeding a variable `u` as `(u, 1, 0, 0, 0, 0)` and `w`
/// as `(w, 0, 1, 0, 0, 0)` makes every arithmetic composition propagate the
/// analytic chain rule with no truncation error, so after evaluating `f` the
/// components hold f, ∂f/∂u, ∂f/∂w, ∂²f/∂u², ∂²f/∂u∂w and ∂²f/∂w².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e11: f64,
    pub e12: f64,
    pub e22: f64,
}

impl HyperDual {
    pub fn constant(re: f64) -> Self {
        Self {
            re,
            ..Self::default()
        }
    }

    /// Seed the first independent variable.
    pub fn var1(re: f64) -> Self {
        Self {
            re,
            e1: 1.0,
            ..Self::default()
        }
    }

    /// Seed the second independent variable.
    pub fn var2(re: f64) -> Self {
        Self {
            re,
            e2: 1.0,
            ..Self::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite()
            && self.e1.is_finite()
            && self.e2.is_finite()
            && self.e11.is_finite()
            && self.e12.is_finite()
            && self.e22.is_finite()
    }

    /// Apply a scalar function given its value and first two derivatives at
    /// `self.re`. This is the univariate chain rule; every elementary
    /// function below is a one-liner through it.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            re: f0,
            e1: f1 * self.e1,
            e2: f1 * self.e2,
            e11: f1 * self.e11 + f2 * self.e1 * self.e1,
            e12: f1 * self.e12 + f2 * self.e1 * self.e2,
            e22: f1 * self.e22 + f2 * self.e2 * self.e2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.re;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn recip(self) -> Self {
        let x = self.re;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn powi(self, n: i32) -> Self {
        // n = 0 and n = 1 are handled apart so x = 0 does not turn the zero
        // coefficients n and n(n-1) into 0 * inf = NaN.
        match n {
            0 => self.chain(1.0, 0.0, 0.0),
            1 => self,
            _ => {
                let x = self.re;
                let f0 = x.powi(n);
                let f1 = f64::from(n) * x.powi(n - 1);
                let f2 = f64::from(n) * f64::from(n - 1) * x.powi(n - 2);
                self.chain(f0, f1, f2)
            }
        }
    }

    pub fn powf(self, a: f64) -> Self {
        let x = self.re;
        self.chain(x.powf(a), a * x.powf(a - 1.0), a * (a - 1.0) * x.powf(a - 2.0))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(c, -s, -c)
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            e1: self.e1 + rhs.e1,
            e2: self.e2 + rhs.e2,
            e11: self.e11 + rhs.e11,
            e12: self.e12 + rhs.e12,
            e22: self.e22 + rhs.e22,
        }
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            e1: self.e1 - rhs.e1,
            e2: self.e2 - rhs.e2,
            e11: self.e11 - rhs.e11,
            e12: self.e12 - rhs.e12,
            e22: self.e22 - rhs.e22,
        }
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: self.re * rhs.re,
            e1: self.re * rhs.e1 + self.e1 * rhs.re,
            e2: self.re * rhs.e2 + self.e2 * rhs.re,
            e11: self.re * rhs.e11 + 2.0 * self.e1 * rhs.e1 + self.e11 * rhs.re,
            e12: self.re * rhs.e12 + self.e1 * rhs.e2 + self.e2 * rhs.e1 + self.e12 * rhs.re,
            e22: self.re * rhs.e22 + 2.0 * self.e2 * rhs.e2 + self.e22 * rhs.re,
        }
    }
}

impl Div for HyperDual {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            e1: -self.e1,
            e2: -self.e2,
            e11: -self.e11,
            e12: -self.e12,
            e22: -self.e22,
        }
    }
}

impl Add<f64> for HyperDual {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.re += rhs;
        self
    }
}

impl Add<HyperDual> for f64 {
    type Output = HyperDual;
    fn add(self, rhs: HyperDual) -> HyperDual {
        rhs + self
    }
}

impl Sub<f64> for HyperDual {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.re -= rhs;
        self
    }
}

impl Sub<HyperDual> for f64 {
    type Output = HyperDual;
    fn sub(self, rhs: HyperDual) -> HyperDual {
        -rhs + self
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            re: self.re * rhs,
            e1: self.e1 * rhs,
            e2: self.e2 * rhs,
            e11: self.e11 * rhs,
            e12: self.e12 * rhs,
            e22: self.e22 * rhs,
        }
    }
}

impl Mul<HyperDual> for f64 {
    type Output = HyperDual;
    fn mul(self, rhs: HyperDual) -> HyperDual {
        rhs * self
    }
}

impl Div<f64> for HyperDual {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl Div<HyperDual> for f64 {
    type Output = HyperDual;
    fn div(self, rhs: HyperDual) -> HyperDual {
        rhs.recip() * self
    }
}
