//! Smoothing Newton method for `wHLCP(A, B, w, q)`.
//!
//! The problem is rewritten through the weighted Fischer–Burmeister map as
//! `x + y − √(x² + y² + 2w) = 0, Ax + By − q = 0`. At smoothing level `μ > 0`
//! the square root argument is shifted by `2μ²e`, which keeps it in the
//! interior of the cone so the map is differentiable:
//!
//! ```text
//! F_μ(x, y) = ( x + y − s,  Ax + By − q ),   s = √(x² + y² + 2w + 2μ²e)
//! F_μ'     = [ I − L_s⁻¹L_x   I − L_s⁻¹L_y ]
//!            [ A              B            ]
//! ```
//!
//! Newton steps use Armijo backtracking on `½‖F_μ‖²`; `μ` shrinks by `sigma`
//! once `‖F_μ‖ ≤ μ`. Termination is decided on the unsmoothed residuals.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{Algebra, Element};
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, Lu, Matrix};
use crate::maps::{residuals_coords, ResidualTriple};
use crate::operator::PairProblem;

const DIVERGENCE_MERIT: f64 = 1e12;
const MAX_BACKTRACKS: usize = 40;
const START_SPREAD: f64 = 0.5;
/// Random starts tried when a warm-started path level fails.
const PATH_FALLBACK_STARTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Termination threshold on every unsmoothed residual.
    pub tol: f64,
    pub mu0: f64,
    /// Factor applied to `μ` once a smoothing level is solved to `‖F_μ‖ ≤ μ`.
    pub sigma: f64,
    pub max_outer: usize,
    /// Newton steps allowed per smoothing level.
    pub max_inner: usize,
    pub armijo_beta: f64,
    pub armijo_gamma: f64,
    pub starts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            mu0: 1.0,
            sigma: 0.2,
            max_outer: 40,
            max_inner: 50,
            armijo_beta: 0.5,
            armijo_gamma: 1e-4,
            starts: 1,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(invalid("sigma must lie in (0, 1)"));
        }
        if !(self.mu0 > 0.0) {
            return Err(invalid("mu0 must be positive"));
        }
        if !(self.armijo_beta > 0.0 && self.armijo_beta < 1.0) {
            return Err(invalid("armijo_beta must lie in (0, 1)"));
        }
        if !(self.armijo_gamma > 0.0 && self.armijo_gamma < 0.5) {
            return Err(invalid("armijo_gamma must lie in (0, 1/2)"));
        }
        if self.starts == 0 {
            return Err(invalid("starts must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    NumericFailure,
    Diverged,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIterations => "max_iterations",
            Self::NumericFailure => "numeric_failure",
            Self::Diverged => "diverged",
        }
    }
}

/// One accepted Newton step: the smoothing level and the merit `½‖F_μ‖²` after the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub mu: f64,
    pub merit: f64,
    /// `(‖x‖² + ‖y‖²)^½` of the accepted iterate.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: Element,
    pub y: Element,
    pub residuals: ResidualTriple,
    /// Accepted Newton steps.
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
    /// Index of the start that produced this report.
    pub start: usize,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Largest iterate norm seen along the run, including the reported pair.
    pub fn peak_norm(&self) -> f64 {
        let last = libm::hypot(self.x.norm(), self.y.norm());
        self.trace.iter().map(|t| t.norm).fold(last, f64::max)
    }
}

/// `F_μ(x, y)` as a coordinate vector of length `2·dim`.
pub fn smoothed_residual(x: &Element, y: &Element, problem: &PairProblem, mu: f64) -> Result<Vec<f64>> {
    check_pair(x, y, problem)?;
    Ok(smoothed_parts(problem, x.coords(), y.coords(), mu)?.0)
}

/// Derivative of `F_μ` at `(x, y)` as a dense `2·dim × 2·dim` matrix.
pub fn assemble_jacobian(x: &Element, y: &Element, problem: &PairProblem, mu: f64) -> Result<Matrix> {
    if !(mu > 0.0) {
        return Err(invalid("the smoothing parameter must be positive"));
    }
    check_pair(x, y, problem)?;
    let (_, s) = smoothed_parts(problem, x.coords(), y.coords(), mu)?;
    jacobian_coords(problem, x.coords(), y.coords(), &s)
}

fn check_pair(x: &Element, y: &Element, problem: &PairProblem) -> Result<()> {
    let alg = problem.algebra();
    if x.algebra() != alg || y.algebra() != alg {
        return Err(invalid("iterate does not live in the problem's algebra"));
    }
    Ok(())
}

/// Returns `F_μ` and the square root `s` used in it.
fn smoothed_parts(problem: &PairProblem, x: &[f64], y: &[f64], mu: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let alg = problem.algebra();
    let n = alg.dim();
    let xx = alg.product_coords(x, x);
    let yy = alg.product_coords(y, y);
    let e = alg.unit_coords();
    let w = problem.w().coords();
    let arg: Vec<f64> = (0..n).map(|i| xx[i] + yy[i] + 2.0 * w[i] + 2.0 * mu * mu * e[i]).collect();
    let s = alg.sqrt_psd_coords(&arg)?;
    let mut f = Vec::with_capacity(2 * n);
    f.extend((0..n).map(|i| x[i] + y[i] - s[i]));
    f.extend(problem.linear_residual_coords(x, y));
    Ok((f, s))
}

fn jacobian_coords(problem: &PairProblem, x: &[f64], y: &[f64], s: &[f64]) -> Result<Matrix> {
    let alg = problem.algebra();
    let n = alg.dim();
    let ls = alg.lyapunov_coords(s);
    let lu = Lu::factor(&ls).map_err(|_| Error::NumericFailure {
        reason: "multiplication operator of the smoothed root is singular".into(),
        iterations: 0,
    })?;
    let gx = lu.solve_matrix(&alg.lyapunov_coords(x));
    let gy = lu.solve_matrix(&alg.lyapunov_coords(y));
    let a = problem.a().matrix();
    let b = problem.b().matrix();
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let id = if r == c { 1.0 } else { 0.0 };
            j[(r, c)] = id - gx[(r, c)];
            j[(r, n + c)] = id - gy[(r, c)];
            j[(n + r, c)] = a[(r, c)];
            j[(n + r, n + c)] = b[(r, c)];
        }
    }
    Ok(j)
}

fn half_sq(f: &[f64]) -> f64 {
    0.5 * dot(f, f)
}

/// Initial point for start `k`: `(e, e)` for `k = 0`, otherwise `(exp(s·g₁), exp(s·g₂))`
/// with `s = √k/2` and seeded standard normal `g₁, g₂`, so both stay in the
/// interior of the cone.
pub fn starting_point(algebra: &Algebra, seed: u64, k: usize) -> Result<(Element, Element)> {
    if k == 0 {
        return Ok((algebra.unit(), algebra.unit()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    // later starts wander further from e
    let spread = START_SPREAD * libm::sqrt(k as f64);
    let mut draw = || -> Result<Element> {
        let g: Vec<f64> = (0..algebra.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let c = algebra.map_spectrum(&g, |l| libm::exp(spread * l))?;
        Ok(Element::from_raw(algebra, c))
    };
    let x = draw()?;
    let y = draw()?;
    Ok((x, y))
}

/// Solves from the configured starts and returns the best report
/// (ranked by status, then final residual, then start index).
pub fn solve(problem: &PairProblem, config: &SolverConfig) -> Result<SolveReport> {
    let reports = solve_all_starts(problem, config)?;
    Ok(merge_reports(reports).expect("at least one start"))
}

/// Runs every start independently and returns the reports in start order.
pub fn solve_all_starts(problem: &PairProblem, config: &SolverConfig) -> Result<Vec<SolveReport>> {
    config.validate()?;
    (0..config.starts).map(|k| solve_start(problem, config, k)).collect()
}

pub fn solve_start(problem: &PairProblem, config: &SolverConfig, k: usize) -> Result<SolveReport> {
    let (x0, y0) = starting_point(problem.algebra(), config.seed, k)?;
    let mut r = solve_from(problem, config, &x0, &y0)?;
    r.start = k;
    Ok(r)
}

/// Picks the best report: converged before anything else, then the smallest
/// residual, then the lowest start index.
pub fn merge_reports(reports: Vec<SolveReport>) -> Option<SolveReport> {
    reports.into_iter().min_by(|a, b| {
        a.status
            .cmp(&b.status)
            .then(a.residuals.max().total_cmp(&b.residuals.max()))
            .then(a.start.cmp(&b.start))
    })
}

/// Runs the smoothing Newton method from `(x0, y0)`.
pub fn solve_from(problem: &PairProblem, config: &SolverConfig, x0: &Element, y0: &Element) -> Result<SolveReport> {
    config.validate()?;
    check_pair(x0, y0, problem)?;
    let alg = problem.algebra().clone();
    let n = alg.dim();

    let mut z: Vec<f64> = x0.coords().iter().chain(y0.coords()).copied().collect();
    let mut mu = config.mu0;
    let mut iterations = 0;
    let mut trace = Vec::new();

    let split = |z: &[f64]| (z[..n].to_vec(), z[n..].to_vec());
    let finish = |status, z: &[f64], res, iterations, trace| {
        let (x, y) = split(z);
        SolveReport {
            status,
            x: Element::from_raw(&alg, x),
            y: Element::from_raw(&alg, y),
            residuals: res,
            iterations,
            trace,
            start: 0,
        }
    };

    let mut res = residuals_coords(&z[..n], &z[n..], problem)?;
    if res.within(config.tol) {
        return Ok(finish(SolveStatus::Converged, &z, res, 0, trace));
    }
    let mut best = (res, z.clone());

    for _ in 0..config.max_outer {
        for _ in 0..config.max_inner {
            let (f, s) = smoothed_parts(problem, &z[..n], &z[n..], mu)?;
            let merit = half_sq(&f);
            if !merit.is_finite() {
                return Ok(finish(SolveStatus::NumericFailure, &best.1, best.0, iterations, trace));
            }
            if libm::sqrt(2.0 * merit) <= mu {
                break;
            }
            let step = jacobian_coords(problem, &z[..n], &z[n..], &s).and_then(|j| {
                let lu = Lu::factor(&j)?;
                Ok(lu.solve(&f))
            });
            let d = match step {
                Ok(d) => d,
                Err(_) => return Ok(finish(SolveStatus::NumericFailure, &best.1, best.0, iterations, trace)),
            };

            // Armijo on ½‖F_μ‖² along the Newton direction -d, where ∇θᵀ(-d) = -2θ.
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial: Vec<f64> = z.iter().zip(&d).map(|(zi, di)| zi - t * di).collect();
                let (ft, _) = smoothed_parts(problem, &trial[..n], &trial[n..], mu)?;
                let mt = half_sq(&ft);
                if mt.is_finite() && mt <= (1.0 - 2.0 * config.armijo_gamma * t) * merit {
                    accepted = Some((trial, mt));
                    break;
                }
                t *= config.armijo_beta;
            }
            let Some((trial, mt)) = accepted else {
                // no sufficient decrease at this level; move on to the next one
                break;
            };
            z = trial;
            iterations += 1;
            let norm = libm::hypot(alg.norm_coords(&z[..n]), alg.norm_coords(&z[n..]));
            trace.push(TracePoint { mu, merit: mt, norm });
            if mt > DIVERGENCE_MERIT {
                let r = residuals_coords(&z[..n], &z[n..], problem)?;
                return Ok(finish(SolveStatus::Diverged, &z, r, iterations, trace));
            }
            res = residuals_coords(&z[..n], &z[n..], problem)?;
            if res.within(config.tol) {
                return Ok(finish(SolveStatus::Converged, &z, res, iterations, trace));
            }
            if res.max() < best.0.max() {
                best = (res, z.clone());
            }
        }
        mu *= config.sigma;
    }
    Ok(finish(SolveStatus::MaxIterations, &best.1, best.0, iterations, trace))
}

/// Reports along a weight schedule `t₀ > t₁ > … > 0`, plus the limit solve at `w = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathReport {
    pub schedule: Vec<f64>,
    /// Report `k` solves `wHLCP(A, B, t_k·w, q)`.
    pub levels: Vec<SolveReport>,
    /// Residuals of the last level's iterate against the unweighted problem.
    pub last_level_unweighted: ResidualTriple,
    /// Solve of `HLCP(A, B, q)` warm-started from the last level.
    pub limit: SolveReport,
}

/// Builds the geometric schedule `1, r, r², …, r^(steps-1)`.
pub fn geometric_schedule(steps: usize, ratio: f64) -> Result<Vec<f64>> {
    if steps == 0 || !(ratio > 0.0 && ratio < 1.0) {
        return Err(invalid("a geometric schedule needs steps >= 1 and a ratio in (0, 1)"));
    }
    Ok((0..steps).map(|k| libm::pow(ratio, k as f64)).collect())
}

/// A warm start can sit on a symmetry of the problem (e.g. `x = y` when
/// `A = B`) where the Jacobian is singular; retry from seeded random starts.
fn with_fallback(p: &PairProblem, config: &SolverConfig, first: SolveReport) -> Result<SolveReport> {
    if first.converged() {
        return Ok(first);
    }
    let mut reports = alloc::vec![first];
    for k in 1..=PATH_FALLBACK_STARTS {
        let r = solve_start(p, config, k)?;
        let done = r.converged();
        reports.push(r);
        if done {
            break;
        }
    }
    Ok(merge_reports(reports).expect("nonempty"))
}

/// Follows the solutions of `wHLCP(A, B, t·w, q)` as `t` decreases along
/// `schedule`, warm-starting every level from the previous one. A level whose
/// warm start does not converge is retried from seeded random starts.
pub fn path_trace(problem: &PairProblem, config: &SolverConfig, schedule: &[f64]) -> Result<PathReport> {
    config.validate()?;
    if schedule.is_empty() {
        return Err(invalid("empty schedule"));
    }
    if schedule.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(invalid("schedule values must lie in (0, 1]"));
    }
    if schedule.windows(2).any(|p| !(p[1] < p[0])) {
        return Err(invalid("schedule must be strictly decreasing"));
    }
    let lmin = problem.w().min_eigenvalue()?;
    if !(lmin > 0.0) {
        return Err(invalid(format!("path tracing needs an interior weight (smallest eigenvalue {lmin:e})")));
    }

    let mut levels: Vec<SolveReport> = Vec::with_capacity(schedule.len());
    for &t in schedule {
        let p = problem.with_weight(problem.w().scale(t))?;
        let r = match levels.last() {
            None => solve(&p, config)?,
            Some(prev) => solve_from(&p, config, &prev.x, &prev.y)?,
        };
        levels.push(with_fallback(&p, config, r)?);
    }
    let last = levels.last().expect("nonempty schedule");
    let unweighted = problem.with_weight(problem.algebra().zero())?;
    let last_level_unweighted = residuals_coords(last.x.coords(), last.y.coords(), &unweighted)?;
    let limit = solve_from(&unweighted, config, &last.x, &last.y)?;
    let limit = with_fallback(&unweighted, config, limit)?;
    Ok(PathReport { schedule: schedule.to_vec(), levels, last_level_unweighted, limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::operator::LinearOperator;

    fn scalar_problem(a: f64, b: f64, w: f64, q: f64) -> PairProblem {
        let r1 = Algebra::rn(1).unwrap();
        let op = |v: f64| LinearOperator::new(&r1, Matrix::from_rows(&[[v]]).unwrap()).unwrap();
        PairProblem::new(op(a), op(b), r1.element(vec![w]).unwrap(), r1.element(vec![q]).unwrap()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig { sigma: 1.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { tol: 0.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { mu0: -1.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn jacobian_scalar_at_origin() {
        let p = scalar_problem(2.0, 3.0, 0.0, 1.0);
        let z = p.algebra().zero();
        let j = assemble_jacobian(&z, &z, &p, 1.0).unwrap();
        assert_eq!(j.to_rows(), vec![vec![1.0, 1.0], vec![2.0, 3.0]]);
        assert!(assemble_jacobian(&z, &z, &p, 0.0).is_err());
    }

    #[test]
    fn scalar_closed_form() {
        let p = scalar_problem(1.0, 1.0, 1.0, 2.0);
        let far = p.algebra().element(vec![5.0]).unwrap();
        let near = p.algebra().element(vec![0.1]).unwrap();
        let r = solve_from(&p, &SolverConfig::default(), &far, &near).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.x.coords()[0] - 1.0).abs() < 1e-4);
        assert!((r.y.coords()[0] - 1.0).abs() < 1e-4);
        assert!(r.residuals.within(1e-8));
    }

    #[test]
    fn scalar_infeasible_does_not_converge() {
        let p = scalar_problem(1.0, 1.0, 0.0, -1.0);
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_ne!(r.status, SolveStatus::Converged);
    }

    #[test]
    fn merit_is_monotone_within_each_level() {
        let p = scalar_problem(1.0, 2.0, 0.5, 3.0);
        let x0 = p.algebra().element(vec![4.0]).unwrap();
        let r = solve_from(&p, &SolverConfig::default(), &x0, &x0).unwrap();
        assert!(r.converged());
        for w in r.trace.windows(2) {
            if w[0].mu == w[1].mu {
                assert!(w[1].merit <= w[0].merit);
            }
        }
    }

    #[test]
    fn schedule_checks() {
        let p = scalar_problem(1.0, 1.0, 1.0, 2.0);
        let c = SolverConfig::default();
        assert!(path_trace(&p, &c, &[1.0, 1.0]).is_err());
        assert!(path_trace(&p, &c, &[1.5, 0.5]).is_err());
        assert!(path_trace(&p, &c, &[]).is_err());
        let flat = scalar_problem(1.0, 1.0, 0.0, 2.0);
        assert!(path_trace(&flat, &c, &[1.0, 0.5]).is_err());
        assert_eq!(geometric_schedule(3, 0.5).unwrap(), vec![1.0, 0.5, 0.25]);
        assert!(geometric_schedule(3, 1.0).is_err());
    }

    #[test]
    fn starting_points_are_interior_and_deterministic() {
        for alg in [Algebra::rn(3).unwrap(), Algebra::spin(4).unwrap(), Algebra::sym(3).unwrap()] {
            let (x, y) = starting_point(&alg, 11, 3).unwrap();
            assert!(x.min_eigenvalue().unwrap() > 0.0);
            assert!(y.min_eigenvalue().unwrap() > 0.0);
            let (x2, _) = starting_point(&alg, 11, 3).unwrap();
            assert_eq!(x, x2);
            let (e, _) = starting_point(&alg, 11, 0).unwrap();
            assert_eq!(e, alg.unit());
        }
    }
}
