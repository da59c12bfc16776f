//! Cone spectral radius machinery: power-sequence bounds, the eps-perturbed
//! approximate-eigenvector contraction iteration, eps -> 0 continuation with
//! Aitken extrapolation, Collatz-Wielandt certificates and the linear escape
//! rate.
//!
//! The perturbation is f_eps(x) = f(x) + eps ||x||_u u with the order-unit
//! norm as the monotone gauge. For each eps > 0 the normalized iteration
//! x -> f_eps(x)/||f_eps(x)||_u contracts the Hilbert metric on a ball of
//! radius R = log((M1+eps)/eps) around u, with contraction constant at most
//! 1 - (eps/(M1+eps)) (1-e^{-2R})/(2R), where M1 = M(f(u)/u).

use crate::cone::{
    interior_gap, is_interior, m_lower, m_ratio, order_unit_norm, projective_distance, Point,
};
use crate::error::{ConeError, Result};
use crate::maps::{apply, radial_extension, MapSpec, RADIAL_SCHEDULE};
use serde::Serialize;

/// Hilbert-increment tolerance used by the continuation's inner solves.
pub const INNER_TOL: f64 = 1e-10;
/// Iteration cap for a single eps-solve inside the continuation.
pub const INNER_MAX_ITER: usize = 2_000_000;
/// Cap on the number of continuation steps.
pub const MAX_EPS_STEPS: usize = 60;

/// Result of one eps-solve.
#[derive(Debug, Clone, Serialize)]
pub struct EigenSolveResult {
    #[serde(skip)]
    pub v_eps: Point,
    pub r_eps: f64,
    pub iterations: usize,
    pub measured_contraction: f64,
    pub converged: bool,
}

/// One continuation step, in the report wire format.
#[derive(Debug, Clone, Serialize)]
pub struct EpsStep {
    pub eps: f64,
    pub r_eps: f64,
    pub iters: usize,
    pub contraction: f64,
    #[serde(skip)]
    pub v_eps: Point,
}

#[derive(Debug, Clone, Serialize)]
pub struct CwUpperEntry {
    pub y: Vec<f64>,
    pub k: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CwLowerEntry {
    pub y: Vec<f64>,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub r_hat: f64,
    pub eps_trace: Vec<EpsStep>,
    pub cw_upper: Vec<CwUpperEntry>,
    pub cw_lower: Vec<CwLowerEntry>,
    pub interior_eigenvector_found: bool,
    pub boundary_drift: f64,
}

/// Gauge ||x||_u for x in the cone, relative to an arbitrary interior u.
fn gauge(x: &Point, u: &Point) -> Result<f64> {
    if x.coords == u.coords {
        return Ok(1.0);
    }
    if u.coords == u.cone.order_unit {
        return Ok(order_unit_norm(x));
    }
    Ok(m_ratio(x, u)?.0)
}

fn apply_perturbed(f: &MapSpec, eps: f64, u: &Point, x: &Point) -> Result<Point> {
    let fx = apply(f, x)?;
    let g = gauge(x, u)?;
    Ok(fx.add(&u.scaled(eps * g)))
}

/// Certified upper bound min_{1<=k<=k_max} M(f^k(u)/u)^{1/k} on the cone
/// spectral radius; converges to it as k_max grows. Iterates are kept
/// gauge-normalized with an accumulated log offset so unbounded orbits do
/// not overflow.
pub fn power_radius(f: &MapSpec, u: &Point, k_max: usize) -> Result<f64> {
    if !is_interior(u) {
        return Err(ConeError::NotInterior { what: "u" });
    }
    if k_max < 2 {
        return Err(ConeError::InvalidMap("k_max must be at least 2".into()));
    }
    let mut cur = u.clone();
    let mut log_gauge = 0.0f64;
    let mut best = f64::INFINITY;
    for k in 1..=k_max {
        cur = apply(f, &cur)?;
        let g = gauge(&cur, u)?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(ConeError::GaugeCollapse);
        }
        log_gauge += g.ln();
        cur = cur.scaled(1.0 / g);
        // M(f^k(u)/u) = exp(log_gauge) * M(cur/u) = exp(log_gauge) here
        // because cur is normalized to M(cur/u) = 1
        let val = (log_gauge / k as f64).exp();
        best = best.min(val);
    }
    Ok(best)
}

fn solve_from(
    f: &MapSpec,
    eps: f64,
    u: &Point,
    start: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<EigenSolveResult> {
    if eps <= 0.0 {
        return Err(ConeError::InvalidMap("eps must be positive".into()));
    }
    let mut x = start.scaled(1.0 / gauge(start, u)?);
    let mut prev_step: Option<f64> = None;
    let mut contraction = 0.0f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let fx = apply_perturbed(f, eps, u, &x)?;
        let g = gauge(&fx, u)?;
        if !(g > 0.0) {
            return Err(ConeError::GaugeCollapse);
        }
        let next = fx.scaled(1.0 / g);
        let step = projective_distance(&next, &x)?.max(0.0);
        if let Some(p) = prev_step {
            if p > 1e-13 {
                contraction = contraction.max(step / p);
            }
        }
        prev_step = Some(step);
        x = next;
        if step < tol {
            converged = true;
            break;
        }
    }
    let fx = apply_perturbed(f, eps, u, &x)?;
    let r_eps = gauge(&fx, u)?;
    Ok(EigenSolveResult {
        v_eps: x,
        r_eps,
        iterations,
        measured_contraction: contraction,
        converged,
    })
}

/// Unique normalized eigenvector of the eps-perturbed map, found by fixed
/// point iteration of x -> f_eps(x)/||f_eps(x)||_u from x0 = u; stops when
/// the Hilbert increment of consecutive normalized iterates drops below tol.
pub fn approx_eigenpair(
    f: &MapSpec,
    eps: f64,
    u: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<EigenSolveResult> {
    if !is_interior(u) {
        return Err(ConeError::NotInterior { what: "u" });
    }
    solve_from(f, eps, u, u, tol, max_iter)
}

fn aitken(trace: &[EpsStep]) -> f64 {
    let n = trace.len();
    let last = trace[n - 1].r_eps;
    if n < 3 {
        return last;
    }
    let (r0, r1, r2) = (
        trace[n - 3].r_eps,
        trace[n - 2].r_eps,
        trace[n - 1].r_eps,
    );
    let d1 = r1 - r0;
    let d2 = r2 - r1;
    let denom = d2 - d1;
    if denom.abs() <= 1e-14 * last.abs().max(1e-300) {
        return last;
    }
    let extrapolated = r2 - d2 * d2 / denom;
    // for a geometric tail with ratio rho the correction is
    // d2 * rho/(1-rho); reject only wildly larger jumps (non-geometric tail)
    if !extrapolated.is_finite() || (extrapolated - r2).abs() > 20.0 * d2.abs() {
        return last;
    }
    extrapolated
}

/// eps -> 0 continuation: runs warm-started eps-solves along
/// eps_j = eps0 * decay^j until |r_j - r_{j+1}| < tol or 60 steps, and
/// Aitken-extrapolates the tail.
///
/// `interior_eigenvector_found` is true when the relative interior gap of
/// v_eps stays bounded away from zero along the tail (threshold 1e-6, with a
/// decay-ratio test to reject gaps that shrink geometrically with eps).
pub fn spectral_radius(
    f: &MapSpec,
    u: &Point,
    eps0: f64,
    decay: f64,
    tol: f64,
) -> Result<SpectralReport> {
    if eps0 <= 0.0 || decay <= 0.0 || decay >= 1.0 {
        return Err(ConeError::InvalidMap(
            "continuation requires eps0 > 0 and 0 < decay < 1".into(),
        ));
    }
    if !is_interior(u) {
        return Err(ConeError::NotInterior { what: "u" });
    }
    let mut trace: Vec<EpsStep> = Vec::new();
    let mut drifts: Vec<f64> = Vec::new();
    let mut eps = eps0;
    let mut start = u.clone();
    for j in 0..=MAX_EPS_STEPS {
        let res = solve_from(f, eps, u, &start, INNER_TOL, INNER_MAX_ITER)?;
        if !res.converged {
            return Err(ConeError::NonConvergence {
                what: format!("eps-solve at eps={eps:e} hit the iteration cap"),
            });
        }
        start = res.v_eps.clone();
        drifts.push(interior_gap(&res.v_eps) / order_unit_norm(&res.v_eps));
        trace.push(EpsStep {
            eps,
            r_eps: res.r_eps,
            iters: res.iterations,
            contraction: res.measured_contraction,
            v_eps: res.v_eps,
        });
        if j > 0 {
            let r_prev = trace[trace.len() - 2].r_eps;
            let r_cur = trace[trace.len() - 1].r_eps;
            if (r_prev - r_cur).abs() < tol {
                break;
            }
        }
        eps *= decay;
    }
    let r_hat = aitken(&trace);
    let boundary_drift = *drifts.last().unwrap();
    let stable = if drifts.len() >= 5 {
        boundary_drift >= 0.5 * drifts[drifts.len() - 5]
    } else {
        true
    };
    let interior_eigenvector_found = boundary_drift >= 1e-6 && stable;

    let v_hat = trace.last().unwrap().v_eps.clone();
    let mut cw_upper = Vec::new();
    for (y, k) in [(u.clone(), 1usize), (u.clone(), 5), (v_hat.clone(), 1)] {
        if let Ok(bound) = cw_upper_bound(f, &y, k) {
            cw_upper.push(CwUpperEntry {
                y: y.coords.clone(),
                k,
                bound,
            });
        }
    }
    let mut cw_lower = Vec::new();
    for y in [u.clone(), v_hat] {
        if let Ok(bound) = cw_lower_bound(f, &y) {
            cw_lower.push(CwLowerEntry {
                y: y.coords.clone(),
                bound,
            });
        }
    }
    Ok(SpectralReport {
        r_hat,
        eps_trace: trace,
        cw_upper,
        cw_lower,
        interior_eigenvector_found,
        boundary_drift,
    })
}

/// Certified upper bound M(f^k(y)/y)^{1/k} on the cone spectral radius.
pub fn cw_upper_bound(f: &MapSpec, y: &Point, k: usize) -> Result<f64> {
    if !is_interior(y) {
        return Err(ConeError::NotInterior { what: "y" });
    }
    if k < 1 {
        return Err(ConeError::InvalidMap("k must be at least 1".into()));
    }
    let mut cur = y.clone();
    let mut log_gauge = 0.0f64;
    for _ in 0..k {
        cur = apply(f, &cur)?;
        let g = gauge(&cur, y)?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(ConeError::GaugeCollapse);
        }
        log_gauge += g.ln();
        cur = cur.scaled(1.0 / g);
    }
    Ok((log_gauge / k as f64).exp())
}

/// Certified lower bound m(f̂(y)/y) on the cone spectral radius, where f̂ is
/// the radial extension; valid for y in C \ {0}.
pub fn cw_lower_bound(f: &MapSpec, y: &Point) -> Result<f64> {
    let fy = radial_extension(f, y, &RADIAL_SCHEDULE)?;
    m_lower(&fy, y)
}

/// Escape-rate estimate (1/k_max) log M(f^{k_max}(x)/x), computed with
/// per-step gauge rescaling; converges to log of the cone spectral radius.
pub fn escape_rate(f: &MapSpec, x: &Point, k_max: usize) -> Result<f64> {
    if !is_interior(x) {
        return Err(ConeError::NotInterior { what: "x" });
    }
    if k_max < 1 {
        return Err(ConeError::InvalidMap("k_max must be at least 1".into()));
    }
    let mut cur = x.clone();
    let mut log_gauge = 0.0f64;
    for _ in 0..k_max {
        cur = apply(f, &cur)?;
        let g = gauge(&cur, x)?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(ConeError::GaugeCollapse);
        }
        log_gauge += g.ln();
        cur = cur.scaled(1.0 / g);
    }
    Ok(log_gauge / k_max as f64)
}

/// Contraction-constant certificate for the eps-perturbed iteration:
/// 1 - (eps/(M1+eps)) (1-e^{-2R})/(2R) with R = log((M1+eps)/eps).
pub fn contraction_certificate(m1: f64, eps: f64) -> f64 {
    let r = ((m1 + eps) / eps).ln();
    1.0 - (eps / (m1 + eps)) * ((1.0 - (-2.0 * r).exp()) / (2.0 * r))
}
