//! Numerical frontier: the smallest `P_WW(a,a)` reachable at a fixed error
//! sum `P_S`.
//!
//! Two independent routes are provided. The θ-family route searches only
//! states with `c₁ = 0` and real non-negative coefficients, parametrized by
//! a single angle. The full-space route searches every normalized state
//! (all magnitudes and relative phases) and so checks whether that
//! restriction loses anything.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Complex;
use crate::search::{bisect, grid_then_golden, nelder_mead, SimplexOptions};
use crate::spectral::{p_sum_from_nu, p_ww_from_nu, NuCoefficients};

/// Largest possible error sum (the top eigenvalue of `Π_S`).
pub const MAX_P_S: f64 = 1.5;

/// Frontier values at or below this are reported as exactly zero.
pub const ZERO_THRESHOLD: f64 = 1e-10;

/// Weight of the quadratic penalty on `|c₀|² < 0` in the full-space search.
pub const PENALTY_WEIGHT: f64 = 1e6;

const RADICAND_SLACK: f64 = 1e-12;
const ZERO_SEARCH_TOL: f64 = 1e-10;
const CRITICAL_SEARCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub theta_grid_size: usize,
    /// Golden-section iterations after the grid scan.
    pub refine_iterations: usize,
    /// Independent local searches in full-space mode.
    pub restarts: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            theta_grid_size: 4096,
            refine_iterations: 60,
            restarts: 32,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.theta_grid_size < 2 || self.refine_iterations == 0 || self.restarts == 0 {
            return Err(Error::InvalidInput(format!(
                "optimizer settings must be positive (grid >= 2): {self:?}"
            )));
        }
        Ok(())
    }
}

/// One sample of the optimal trade-off curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub p_s: f64,
    pub p_ww_min: f64,
    pub argmin: NuCoefficients,
    /// θ with `|c₂| = √P_S cos θ`, `|c₃| = √(2P_S/3) sin θ`.
    pub theta_opt: f64,
    /// False when the local searches did not meet their stopping rule or the
    /// best point violates the constraints.
    pub converged: bool,
}

fn check_p_s(p_s: f64) -> Result<()> {
    if !(0.0..=MAX_P_S).contains(&p_s) {
        return Err(Error::InvalidInput(format!(
            "p_s = {p_s} outside [0, {MAX_P_S}]"
        )));
    }
    Ok(())
}

fn family_coefficients(p_s: f64, theta: f64) -> (f64, f64, f64) {
    let c2 = p_s.sqrt() * theta.cos();
    let c3 = (2.0 * p_s / 3.0).sqrt() * theta.sin();
    let c0 = (1.0 - c2 * c2 - c3 * c3).max(0.0).sqrt();
    (c0, c2, c3)
}

/// Signed `A₀(θ) − A_S(θ)`; `None` where the state would need `|c₀|² < 0`.
fn family_gap(p_s: f64, theta: f64) -> Option<f64> {
    let (c0_sq, c2, c3) = {
        let c2 = p_s.sqrt() * theta.cos();
        let c3 = (2.0 * p_s / 3.0).sqrt() * theta.sin();
        (1.0 - c2 * c2 - c3 * c3, c2, c3)
    };
    if c0_sq < -RADICAND_SLACK {
        return None;
    }
    let a0 = c0_sq.max(0.0).sqrt() / (2.0 * 3f64.sqrt());
    let a_s = 0.5 * c2 + (2.0f64 / 3.0).sqrt() * c3;
    Some(a0 - a_s)
}

fn family_value(p_s: f64, theta: f64) -> f64 {
    family_gap(p_s, theta).map_or(f64::INFINITY, |g| g * g)
}

/// Minimizes `P_WW(a,a)` over the θ-family at fixed `p_s`: a grid scan over
/// one period followed by golden-section refinement.
pub fn frontier_theta_family(p_s: f64, cfg: &OptimizerConfig) -> Result<FrontierPoint> {
    check_p_s(p_s)?;
    cfg.validate()?;
    let m = grid_then_golden(
        |t| family_value(p_s, t),
        0.0,
        TAU,
        cfg.theta_grid_size,
        cfg.refine_iterations,
    );
    if !m.value.is_finite() {
        return Err(Error::Domain(format!("no feasible θ at p_s = {p_s}")));
    }
    let theta = m.x.rem_euclid(TAU);
    let (c0, c2, c3) = family_coefficients(p_s, theta);
    let argmin = NuCoefficients::from_real([c0, 0.0, c2, c3]);
    let p_ww = p_ww_from_nu(&argmin);
    Ok(FrontierPoint {
        p_s,
        p_ww_min: if p_ww <= ZERO_THRESHOLD { 0.0 } else { p_ww },
        argmin,
        theta_opt: theta,
        converged: true,
    })
}

/// Search coordinates of the full-space route: `(α, β, φ₂, φ₃)`.
///
/// The unit vector `u = (cos α, sin α cos β, sin α sin β)` is mapped onto
/// the ellipsoid `½|c₁|² + |c₂|² + (3/2)|c₃|² = P_S`, the phases attach to
/// `c₂` and `c₃`, and `c₀ = √(1 − |c₁|² − |c₂|² − |c₃|²)` is real. Every
/// point therefore has the requested `P_S` and unit norm whenever
/// `|c₀|² ≥ 0`.
fn decode(p_s: f64, x: &[f64]) -> (NuCoefficients, f64) {
    let (alpha, beta, phi2, phi3) = (x[0], x[1], x[2], x[3]);
    let u1 = alpha.cos();
    let u2 = alpha.sin() * beta.cos();
    let u3 = alpha.sin() * beta.sin();
    let m1 = (2.0 * p_s).sqrt() * u1;
    let m2 = p_s.sqrt() * u2;
    let m3 = (2.0 * p_s / 3.0).sqrt() * u3;
    let c0_sq = 1.0 - m1 * m1 - m2 * m2 - m3 * m3;
    let c = NuCoefficients::new(
        Complex::new(c0_sq.max(0.0).sqrt(), 0.0),
        Complex::new(m1, 0.0),
        Complex::from_polar(m2, phi2),
        Complex::from_polar(m3, phi3),
    );
    (c, c0_sq)
}

fn penalized(p_s: f64, x: &[f64]) -> f64 {
    let (c, c0_sq) = decode(p_s, x);
    let violation = (-c0_sq).max(0.0);
    p_ww_from_nu(&c) + PENALTY_WEIGHT * violation * violation
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    value: f64,
    coefficients: NuCoefficients,
    feasible: bool,
    converged: bool,
}

fn run_restart(p_s: f64, seed: u64, index: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let start = [
        rng.random::<f64>() * PI,
        rng.random::<f64>() * TAU,
        (rng.random::<f64>() - 0.5) * TAU,
        (rng.random::<f64>() - 0.5) * TAU,
    ];
    let f = |x: &[f64]| penalized(p_s, x);
    let coarse = nelder_mead(
        f,
        &start,
        SimplexOptions {
            initial_step: 0.5,
            ..SimplexOptions::default()
        },
    );
    // restart the simplex at the coarse optimum to escape a collapsed simplex
    let fine = nelder_mead(
        f,
        &coarse.x,
        SimplexOptions {
            initial_step: 1e-3,
            ..SimplexOptions::default()
        },
    );
    let best = if fine.value <= coarse.value {
        &fine
    } else {
        &coarse
    };
    let (coefficients, c0_sq) = decode(p_s, &best.x);
    RestartOutcome {
        value: p_ww_from_nu(&coefficients),
        coefficients,
        feasible: c0_sq >= -RADICAND_SLACK,
        converged: fine.converged,
    }
}

/// Lexicographic comparison of coefficient magnitudes.
fn magnitude_order(a: &NuCoefficients, b: &NuCoefficients) -> std::cmp::Ordering {
    a.magnitudes()
        .iter()
        .zip(b.magnitudes().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Minimizes `P_WW(a,a)` over all normalized states with the given `p_s`,
/// with `cfg.restarts` seeded Nelder–Mead searches on a penalized
/// objective.
///
/// Restart `i` draws its start point from ChaCha8 seeded with `cfg.seed`
/// on stream `i`; the best feasible result wins, ties broken by the
/// lexicographically smallest magnitude vector `(|c₀|, |c₁|, |c₂|, |c₃|)`.
pub fn frontier_full_space(p_s: f64, cfg: &OptimizerConfig) -> Result<FrontierPoint> {
    check_p_s(p_s)?;
    cfg.validate()?;
    if p_s == MAX_P_S {
        // the constraint set is the single ray through ν₃
        let c = NuCoefficients::from_real([0.0, 0.0, 0.0, 1.0]);
        return Ok(FrontierPoint {
            p_s,
            p_ww_min: p_ww_from_nu(&c),
            argmin: c,
            theta_opt: PI / 2.0,
            converged: true,
        });
    }
    let outcomes = cfg
        .exec
        .map(cfg.restarts, |i| run_restart(p_s, cfg.seed, i));
    let best = outcomes
        .iter()
        .min_by(|a, b| {
            b.feasible
                .cmp(&a.feasible)
                .then(a.value.total_cmp(&b.value))
                .then_with(|| magnitude_order(&a.coefficients, &b.coefficients))
        })
        .expect("at least one restart");

    let c = best.coefficients;
    let [_, _, m2, m3] = c.magnitudes();
    let theta_opt = (m3 * 1.5f64.sqrt()).atan2(m2);
    debug_assert!((p_sum_from_nu(&c) - p_s).abs() <= 1e-8 || !best.feasible);
    Ok(FrontierPoint {
        p_s,
        p_ww_min: if best.value <= ZERO_THRESHOLD {
            0.0
        } else {
            best.value
        },
        argmin: c,
        theta_opt,
        converged: best.feasible && best.converged,
    })
}

/// θ-family frontier at every point of an ascending grid.
pub fn frontier_sweep(grid: &[f64], cfg: &OptimizerConfig) -> Result<Vec<FrontierPoint>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("p_s grid must be ascending".into()));
    }
    cfg.validate()?;
    for &p in grid {
        check_p_s(p)?;
    }
    cfg.exec
        .map(grid.len(), |i| frontier_theta_family(grid[i], cfg))
        .into_iter()
        .collect()
}

/// Smallest `P_S` at which the θ-family reaches `P_WW(a,a) = 0`.
///
/// Bisects on the sign of `min_θ (A₀(θ) − A_S(θ))`, which crosses zero
/// exactly where the frontier first touches zero.
pub fn frontier_zero(cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    bisect(
        |p| {
            grid_then_golden(
                |t| family_gap(p, t).unwrap_or(f64::INFINITY),
                0.0,
                TAU,
                cfg.theta_grid_size,
                cfg.refine_iterations,
            )
            .value
        },
        0.0,
        0.5,
        ZERO_SEARCH_TOL,
    )
}

/// Fixed point of the frontier, `min P_WW(a,a) = P_S`.
pub fn critical_p_s_numeric(cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    let mut failure = None;
    let root = bisect(
        |p| match frontier_theta_family(p, cfg) {
            Ok(fp) => fp.p_ww_min - p,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        0.0,
        3.0 / 28.0,
        CRITICAL_SEARCH_TOL,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(root),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{ps_tight, tightened_bound};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn family_at_zero_is_phi0() {
        let fp = frontier_theta_family(0.0, &OptimizerConfig::default()).unwrap();
        assert!(close(fp.p_ww_min, 1.0 / 12.0, 1e-15));
        assert_eq!(fp.argmin, NuCoefficients::from_real([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(fp.theta_opt, 0.0);
    }

    #[test]
    fn family_at_tight_value_reaches_zero() {
        let fp = frontier_theta_family(ps_tight(), &OptimizerConfig::default()).unwrap();
        assert!(fp.p_ww_min <= 1e-6);
        assert!(close(fp.theta_opt.sin(), 0.7882, 5e-4));
    }

    #[test]
    fn family_angle_tends_to_four_fifths() {
        let fp = frontier_theta_family(1e-8, &OptimizerConfig::default()).unwrap();
        assert!(
            close(fp.theta_opt.sin(), 0.8, 1e-4),
            "{}",
            fp.theta_opt.sin()
        );
    }

    #[test]
    fn family_point_is_feasible() {
        let fp = frontier_theta_family(0.07, &OptimizerConfig::default()).unwrap();
        assert!(close(fp.argmin.norm_sqr(), 1.0, 1e-12));
        assert!(close(p_sum_from_nu(&fp.argmin), 0.07, 1e-12));
        assert!(close(p_ww_from_nu(&fp.argmin), fp.p_ww_min, 1e-15));
    }

    #[test]
    fn family_at_top_of_spectrum() {
        let fp = frontier_theta_family(MAX_P_S, &OptimizerConfig::default()).unwrap();
        assert!(close(fp.p_ww_min, 2.0 / 3.0, 1e-9));
    }

    #[test]
    fn rejects_out_of_range_p_s() {
        let cfg = OptimizerConfig::default();
        assert!(frontier_theta_family(-0.01, &cfg).is_err());
        assert!(frontier_full_space(1.6, &cfg).is_err());
        assert!(frontier_sweep(&[0.1, 0.05], &cfg).is_err());
        let bad = OptimizerConfig { restarts: 0, ..cfg };
        assert!(frontier_full_space(0.1, &bad).is_err());
    }

    #[test]
    fn full_space_at_zero() {
        let fp = frontier_full_space(0.0, &OptimizerConfig::default()).unwrap();
        assert!(close(fp.p_ww_min, 1.0 / 12.0, 1e-6));
    }

    #[test]
    fn full_space_agrees_with_family() {
        let cfg = OptimizerConfig::default();
        let full = frontier_full_space(0.05, &cfg).unwrap();
        let fam = frontier_theta_family(0.05, &cfg).unwrap();
        assert!(full.converged);
        assert!(close(full.p_ww_min, fam.p_ww_min, 1e-5));
        assert!(close(p_sum_from_nu(&full.argmin), 0.05, 1e-8));
        assert!(close(full.argmin.norm_sqr(), 1.0, 1e-10));
    }

    #[test]
    fn full_space_is_deterministic() {
        let cfg = OptimizerConfig {
            restarts: 8,
            seed: 42,
            ..OptimizerConfig::default()
        };
        let a = frontier_full_space(0.03, &cfg).unwrap();
        let b = frontier_full_space(
            0.03,
            &OptimizerConfig {
                exec: Exec::Sequential,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_past_zero_is_zero() {
        let pts = frontier_sweep(&[0.0, 0.2], &OptimizerConfig::default()).unwrap();
        assert!(close(pts[0].p_ww_min, 1.0 / 12.0, 1e-15));
        assert_eq!(pts[1].p_ww_min, 0.0);
    }

    #[test]
    fn zero_and_critical_points() {
        let cfg = OptimizerConfig::default();
        let z = frontier_zero(&cfg).unwrap();
        assert!(close(z, ps_tight(), 1e-8));
        let pc = critical_p_s_numeric(&cfg).unwrap();
        assert!(close(pc, 0.0243, 5e-4));
        assert!(tightened_bound(pc).unwrap() <= pc + 1e-12);
    }
}
