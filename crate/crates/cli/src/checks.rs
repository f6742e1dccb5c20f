//! Invariant suites run by `check` against the algebra and pair of an instance.

use jordan_wlcp_core::pairs::{brute_force_hlcp, hlcp_degree, is_p_pair, is_r0_pair, verify_r_pair_witness, MAX_DEGREE_N};
use jordan_wlcp_core::sampling::{frame_complementary_pair, frame_interior_pair, random_element};
use jordan_wlcp_core::{fb_map, min_map, weighted_fb_map, Algebra, Element, PairProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::report::ReportFile;

const TOL: f64 = 1e-9;
const REPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst value seen, or a short explanation.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { trials: 50, seed: 0 }
    }
}

/// Tracks the worst deviation of a quantity that must stay below a bound.
struct Worst {
    name: &'static str,
    bound: f64,
    value: f64,
}

impl Worst {
    fn new(name: &'static str, bound: f64) -> Self {
        Self { name, bound, value: 0.0 }
    }

    fn see(&mut self, v: f64) {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail
        if !(v <= self.value) {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            passed: self.value <= self.bound,
            detail: format!("max {:.3e} (bound {:.0e})", self.value, self.bound),
        }
    }
}

fn outcome(name: &str, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome { name: name.to_string(), passed, detail: detail.into() }
}

fn dist(a: &Element, b: &Element) -> f64 {
    (a - b).norm()
}

pub fn run_checks(problem: &PairProblem, report: Option<&ReportFile>, opts: &CheckOptions) -> Result<CheckSummary> {
    let mut checks = algebra_suite(problem.algebra(), opts)?;
    checks.extend(map_suite(problem.algebra(), opts)?);
    checks.extend(operator_suite(problem)?);
    if problem.algebra().descriptor().is_rn() && problem.algebra().dim() <= MAX_DEGREE_N {
        checks.extend(pair_suite(problem)?);
    }
    if let Some(r) = report {
        let drift = r.residual_drift(problem)?;
        checks.push(outcome(
            "report.residuals_recompute",
            drift <= REPORT_TOL,
            format!("max drift {drift:.3e} (bound {REPORT_TOL:.0e})"),
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(CheckSummary { passed, checks })
}

fn algebra_suite(alg: &Algebra, opts: &CheckOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut split = Worst::new("algebra.plus_minus_split", TOL);
    let mut orth = Worst::new("algebra.plus_minus_orthogonal", TOL);
    let mut recon = Worst::new("algebra.spectral_reconstruction", TOL);
    let mut root = Worst::new("algebra.sqrt_of_square_is_abs", TOL);
    for _ in 0..opts.trials {
        let x = random_element(alg, &mut rng);
        let scale = 1.0 + x.norm();
        let (p, m) = (x.plus()?, x.minus()?);
        split.see(dist(&(&p - &m), &x) / scale);
        orth.see(p.jordan_product(&m)?.norm().max(p.inner_product(&m)?.abs()) / (scale * scale));
        recon.see(dist(&x.spectral_decompose()?.reconstruct(), &x) / scale);
        root.see(dist(&x.square().sqrt()?, &x.abs()?) / scale);
    }
    Ok(vec![split.finish(), orth.finish(), recon.finish(), root.finish()])
}

fn map_suite(alg: &Algebra, opts: &CheckOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let mut translate = Worst::new("maps.min_translation", TOL);
    let mut homogeneous = Worst::new("maps.min_homogeneity", TOL);
    let mut comp = Worst::new("maps.complementary_zeros", TOL);
    let mut weighted = Worst::new("maps.weighted_fb_forward", TOL);
    let mut homotopy = Worst::new("maps.fb_min_homotopy", TOL);
    let mut commute = true;
    let mut separated = f64::INFINITY;
    for _ in 0..opts.trials {
        let u = random_element(alg, &mut rng);
        let x = random_element(alg, &mut rng);
        let y = random_element(alg, &mut rng);
        let scale = 1.0 + u.norm() + x.norm() + y.norm();
        translate.see(dist(&(&u + &min_map(&x, &y)?), &min_map(&(&u + &x), &(&u + &y))?) / scale);
        let l: f64 = rng.gen_range(0.0..4.0);
        homogeneous.see(dist(&(l * &min_map(&x, &y)?), &min_map(&(l * &x), &(l * &y))?) / (scale * (1.0 + l)));

        // random pairs are not complementary: every homotopy member stays away from zero
        let (mm, fb) = (min_map(&x, &y)?, fb_map(&x, &y)?);
        for k in 0..=10 {
            let t = f64::from(k) / 10.0;
            separated = separated.min((&(t * &fb) + &((1.0 - t) * &mm)).norm());
        }

        let (cx, cy) = frame_complementary_pair(alg, &mut rng)?;
        let (mm, fb) = (min_map(&cx, &cy)?, fb_map(&cx, &cy)?);
        comp.see(mm.norm().max(fb.norm()).max(cx.inner_product(&cy)?.abs()));
        commute &= cx.operator_commute(&cy, TOL)?;
        for k in 0..=10 {
            let t = f64::from(k) / 10.0;
            homotopy.see((&(t * &fb) + &((1.0 - t) * &mm)).norm());
        }

        let (px, py) = frame_interior_pair(alg, 0.0, 2.0, &mut rng)?;
        weighted.see(weighted_fb_map(&px, &py, &px.jordan_product(&py)?)?.norm());
    }
    Ok(vec![
        translate.finish(),
        homogeneous.finish(),
        comp.finish(),
        outcome("maps.complementary_commute", commute, if commute { "all pairs" } else { "a pair failed" }),
        homotopy.finish(),
        outcome(
            "maps.noncomplementary_separated",
            opts.trials == 0 || separated >= 1e-6,
            format!("min {separated:.3e} (bound 1e-6)"),
        ),
        weighted.finish(),
    ])
}

fn operator_suite(problem: &PairProblem) -> Result<Vec<CheckOutcome>> {
    let alg = problem.algebra();
    let mut cols = Worst::new("operators.apply_matches_columns", 0.0);
    for (op, _) in [(problem.a(), "A"), (problem.b(), "B")] {
        for j in 0..alg.dim() {
            let img = op.apply(&alg.basis(j))?;
            let col = op.matrix().column(j);
            cols.see(img.coords().iter().zip(&col).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
        }
    }
    let lmin = problem.w().min_eigenvalue()?;
    Ok(vec![
        cols.finish(),
        outcome("operators.weight_in_cone", lmin >= -TOL * (1.0 + problem.w().norm()), format!("min eigenvalue {lmin:.3e}")),
    ])
}

fn pair_suite(problem: &PairProblem) -> Result<Vec<CheckOutcome>> {
    let (a, b) = (problem.a(), problem.b());
    let mut out = Vec::new();
    let r0 = is_r0_pair(a, b)?;
    match &r0.witness {
        Some((x, y)) => {
            let res = (&a.apply(x)? + &b.apply(y)?).norm();
            let mm = min_map(x, y)?.norm();
            let nonzero = x.norm() + y.norm() > 1e-6;
            out.push(outcome(
                "pairs.r0_witness_sound",
                nonzero && res <= TOL && mm <= TOL,
                format!("|Ax+By| {res:.3e}, |x min y| {mm:.3e}"),
            ));
        }
        None => out.push(outcome("pairs.r0_witness_sound", true, "pair is R0")),
    }
    if is_p_pair(a, b)? {
        out.push(outcome("pairs.p_implies_r0", r0.is_r0, ""));
        if r0.is_r0 {
            let p = b.apply(&problem.algebra().unit())?;
            out.push(outcome("pairs.p_implies_r_witness", verify_r_pair_witness(a, b, &p)?, "p = Be"));
            let d = hlcp_degree(a, b, 3, 0)?;
            out.push(outcome("pairs.p_implies_unit_degree", d.degree.abs() == 1, format!("degree {}", d.degree)));
            let count = brute_force_hlcp(a, b, problem.q(), 1e-12)?.len();
            out.push(outcome("pairs.p_unique_hlcp_solution", count == 1, format!("{count} solutions")));
        }
    }
    Ok(out)
}
