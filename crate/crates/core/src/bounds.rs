//! Closed-form lower bounds on `P_WW(a,a)` as a function of the error sum
//! `P_S`.
//!
//! Optimal states have no `|ν₁⟩` component and distribute `P_S` between
//! `|ν₂⟩` and `|ν₃⟩` through an angle θ:
//!
//! ```text
//! c₂ = √P_S cos θ,   c₃ = √(2P_S/3) sin θ
//! P_WW(a,a) = (A₀(θ) − A_S(θ))²
//! A₀(θ) = √[(1/12)(1 − P_S(1 − sin²θ/3))]
//! A_S(θ) = (5/6)((3/5)cos θ + (4/5)sin θ)√P_S
//! ```
//!
//! Bounding `A₀` from below and `A_S` from above separately gives the
//! weaker bound; restricting `sin θ` to the region where the optimum lives
//! gives the tightened one.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::search::{bisect, grid_then_golden};

/// Reference values of the landmarks of the `P_S`–`P_WW` relation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConstants {
    /// `P_WW(a,a)` at `P_S = 0`.
    pub p_ww_at_zero: Rational64,
    /// Zero of the separately optimized bound, 3/28.
    pub separate_bound_limit: Rational64,
    /// Exact smallest `P_S` with `P_WW(a,a) = 0`, `1/(5+√17)`.
    pub ps_tight: f64,
    /// Validity limit quoted for the tightened bound.
    pub tightened_bound_limit: f64,
    /// Quoted numerical value of the exact frontier zero. Used only as a
    /// verification target.
    pub ps_frontier_zero: f64,
    /// Quoted critical error sum below which the inequality must fail.
    pub p_cr: f64,
    /// `sin θ` at the frontier zero.
    pub sin_theta_star: f64,
    /// `sin θ` maximizing `A_S`, 4/5.
    pub sin_theta_max_as: Rational64,
}

impl BoundConstants {
    pub fn reference() -> Self {
        Self {
            p_ww_at_zero: Rational64::new(1, 12),
            separate_bound_limit: Rational64::new(3, 28),
            ps_tight: ps_tight(),
            tightened_bound_limit: TIGHTENED_BOUND_LIMIT,
            ps_frontier_zero: 0.109612,
            p_cr: 0.0243,
            sin_theta_star: 0.7882,
            sin_theta_max_as: Rational64::new(4, 5),
        }
    }
}

/// Upper end of the validity range of [`separate_bound`].
pub const SEPARATE_BOUND_LIMIT: f64 = 3.0 / 28.0;

/// Upper end of the validity range of [`tightened_bound`].
pub const TIGHTENED_BOUND_LIMIT: f64 = 0.109489;

/// Bisection tolerance for [`critical_p_s`].
pub const CRITICAL_TOL: f64 = 1e-12;

/// `1/(5+√17)`.
pub fn ps_tight() -> f64 {
    1.0 / (5.0 + 17f64.sqrt())
}

/// The angle with `cos 2θ = −1/√17` in `(0, π/2)`, where `P_S` of the zero
/// condition is smallest.
pub fn theta_star() -> f64 {
    0.5 * (-1.0 / 17f64.sqrt()).acos()
}

fn check_p_s(p_s: f64) -> Result<()> {
    if !p_s.is_finite() || p_s < 0.0 {
        return Err(Error::Domain(format!(
            "p_s must be finite and >= 0, got {p_s}"
        )));
    }
    Ok(())
}

/// `A₀(θ)`.
pub fn amp_a0(p_s: f64, theta: f64) -> Result<f64> {
    check_p_s(p_s)?;
    let s2 = theta.sin().powi(2);
    let radicand = (1.0 - p_s * (1.0 - s2 / 3.0)) / 12.0;
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "A0 radicand {radicand} is negative at p_s = {p_s}, theta = {theta}"
        )));
    }
    Ok(radicand.sqrt())
}

/// `A_S(θ)`.
pub fn amp_as(p_s: f64, theta: f64) -> Result<f64> {
    check_p_s(p_s)?;
    Ok((5.0 / 6.0) * (0.6 * theta.cos() + 0.8 * theta.sin()) * p_s.sqrt())
}

/// `(A₀(θ) − A_S(θ))²`, the value of `P_WW(a,a)` on the θ-family.
pub fn p_ww_of_theta(p_s: f64, theta: f64) -> Result<f64> {
    Ok((amp_a0(p_s, theta)? - amp_as(p_s, theta)?).powi(2))
}

/// `(√[(1/12)(1−P_S)] − (5/6)√P_S)²`, valid for `0 ≤ P_S ≤ 3/28`.
pub fn separate_bound(p_s: f64) -> Result<f64> {
    if !(0.0..=SEPARATE_BOUND_LIMIT).contains(&p_s) {
        return Err(Error::OutOfValidity {
            p_s,
            limit: SEPARATE_BOUND_LIMIT,
        });
    }
    Ok((((1.0 - p_s) / 12.0).sqrt() - (5.0 / 6.0) * p_s.sqrt()).powi(2))
}

/// `(√[(1/12)(1−(4/5)P_S)] − (5/6)√P_S)²`, valid for `0 ≤ P_S ≤ 0.109489`.
pub fn tightened_bound(p_s: f64) -> Result<f64> {
    if !(0.0..=TIGHTENED_BOUND_LIMIT).contains(&p_s) {
        return Err(Error::OutOfValidity {
            p_s,
            limit: TIGHTENED_BOUND_LIMIT,
        });
    }
    Ok((((1.0 - 0.8 * p_s) / 12.0).sqrt() - (5.0 / 6.0) * p_s.sqrt()).powi(2))
}

/// `P_S` at which `A₀(θ) = A_S(θ)`: `1/(5 − cos 2θ + 4 sin 2θ)`.
pub fn ps_zero_condition(theta: f64) -> Result<f64> {
    let denom = 5.0 - (2.0 * theta).cos() + 4.0 * (2.0 * theta).sin();
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Domain(format!(
            "zero-condition denominator {denom} is not positive at theta = {theta}"
        )));
    }
    Ok(1.0 / denom)
}

/// Numerical minimum of [`ps_zero_condition`] over one period of θ.
/// Returns `(theta, p_s)`.
pub fn min_ps_zero_condition(grid: usize, iterations: usize) -> (f64, f64) {
    let m = grid_then_golden(
        |t| ps_zero_condition(t).unwrap_or(f64::INFINITY),
        0.0,
        std::f64::consts::PI,
        grid,
        iterations,
    );
    (m.x, m.value)
}

/// Fixed point `tightened_bound(p) = p`, found by bisection on `[0, 3/28]`.
pub fn critical_p_s() -> f64 {
    bisect(
        |p| tightened_bound(p).expect("inside validity range") - p,
        0.0,
        SEPARATE_BOUND_LIMIT,
        CRITICAL_TOL,
    )
    .expect("bound exceeds p at 0 and falls below it at 3/28")
}

/// One row of the analytic curves; bounds are clamped to zero outside
/// their validity ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCurvePoint {
    pub p_s: f64,
    pub separate: f64,
    pub tightened: f64,
}

impl BoundCurvePoint {
    pub fn at(p_s: f64) -> Self {
        Self {
            p_s,
            separate: separate_bound(p_s).unwrap_or(0.0),
            tightened: tightened_bound(p_s).unwrap_or(0.0),
        }
    }
}
