//! `x(1-x) f''(x) + 2 f(x) = F(x)` on `[0, 1]` for `F` supported inside
//! `(0, 1)`.
//!
//! With `t = 2x - 1` the equation becomes `(1-t^2) v'' + 2v = G(t)`, whose
//! homogeneous solutions are `v1 = t^2 - 1` and
//! `v2 = 2t + (t^2 - 1) ln((1-t)/(1+t))`, with Wronskian `-4`. Variation of
//! parameters on the normalized equation `v'' + 2v/(1-t^2) = G/(1-t^2)`
//! gives `c1' = v2 G / (4(1-t^2))`, `c2' = G/4`, both integrated from 0.

use crate::error::{Error, Result};

use super::simpson;

/// Simpson intervals used for each coefficient integral.
pub const ODE_QUADRATURE_INTERVALS: usize = 4000;

/// Particular solution with `c1(0) = c2(0) = 0`.
pub struct OdeSolution<F> {
    forcing: F,
    support: (f64, f64),
}

/// `(t^2 - 1) ln((1-t)/(1+t))` written in `x`, extended by 0 at the ends.
fn log_term(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -4.0 * x * (1.0 - x) * ((1.0 - x) / x).ln()
}

fn v1(x: f64) -> f64 {
    -4.0 * x * (1.0 - x)
}

fn v2(x: f64) -> f64 {
    2.0 * (2.0 * x - 1.0) + log_term(x)
}

/// Validates the support and returns the solution.
pub fn solve_ode<F: Fn(f64) -> f64>(forcing: F, support: (f64, f64)) -> Result<OdeSolution<F>> {
    let (a, b) = support;
    if !(a > 0.0 && b < 1.0 && a < b) {
        return Err(Error::invalid(format!(
            "forcing support [{a}, {b}] must be a closed subinterval of (0, 1)"
        )));
    }
    Ok(OdeSolution { forcing, support })
}

impl<F: Fn(f64) -> f64> OdeSolution<F> {
    /// `(c1, c2)` at `x`, integrating in `t` from `t = 0` (`x = 1/2`).
    /// Outside the support of `F` the integrands vanish, so the range is
    /// clipped to it.
    pub fn coefficients(&self, x: f64) -> (f64, f64) {
        let (a, b) = self.support;
        let (lo, hi, sign) = if x >= 0.5 { (0.5, x, 1.0) } else { (x, 0.5, -1.0) };
        let (lo, hi) = (lo.max(a), hi.min(b));
        if lo >= hi {
            return (0.0, 0.0);
        }
        // dt = 2 dx; 1 - t^2 = 4x(1-x)
        let dc1 = |s: f64| 2.0 * v2(s) * (self.forcing)(s) / (16.0 * s * (1.0 - s));
        let dc2 = |s: f64| 0.5 * (self.forcing)(s);
        (
            sign * simpson(&dc1, lo, hi, ODE_QUADRATURE_INTERVALS),
            sign * simpson(&dc2, lo, hi, ODE_QUADRATURE_INTERVALS),
        )
    }

    /// `f(x)` for `x` in `[0, 1]`.
    pub fn value(&self, x: f64) -> f64 {
        let (c1, c2) = self.coefficients(x);
        c1 * v1(x) + c2 * v2(x)
    }

    /// `x(1-x) f''(x)`, from the analytic second derivative
    /// `v'' = 2 c1 + c2 v2'' + G/(1-t^2)` multiplied through by `(1-t^2)`,
    /// which keeps it finite at the endpoints.
    pub fn weighted_second_derivative(&self, x: f64) -> f64 {
        let (c1, c2) = self.coefficients(x);
        let one_minus_t2 = 4.0 * x * (1.0 - x);
        let t = 2.0 * x - 1.0;
        // (1-t^2) v2'' = 2 (1-t^2) ln((1-t)/(1+t)) - 4t
        let weighted_v2 = -2.0 * log_term(x) - 4.0 * t;
        2.0 * c1 * one_minus_t2 + c2 * weighted_v2 + (self.forcing)(x)
    }

    /// `x(1-x) f'' + 2 f - F` at `x`.
    pub fn residual(&self, x: f64) -> f64 {
        self.weighted_second_derivative(x) + 2.0 * self.value(x) - (self.forcing)(x)
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn forcing(&self, x: f64) -> f64 {
        (self.forcing)(x)
    }
}
