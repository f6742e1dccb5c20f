//! Exact classification of operator pairs `{A, B}` on ℝⁿ.
//!
//! Everything here works by enumerating complementary support patterns: a
//! pattern `α ⊆ {0..n}` puts coordinate `i` on the x-side (`x_i ≥ 0, y_i = 0`)
//! when `i ∈ α` and on the y-side otherwise. Fixing `α` turns `Ax + By = q`
//! into the square system `M_α z = q` whose column `i` is `A[:, i]` for
//! `i ∈ α` and `B[:, i]` for `i ∉ α`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::Element;
use crate::error::{invalid, Error, Result};
use crate::linalg::{symmetric_eigen, Lu, Matrix};
use crate::operator::LinearOperator;

/// Largest `n` accepted by the `2ⁿ` enumerations.
pub const MAX_ENUMERATION_N: usize = 20;
/// Largest `n` accepted by degree and R-pair witness computations.
pub const MAX_DEGREE_N: usize = 16;
/// Largest `n` accepted by the positive-stability test (`n² × n²` solve).
pub const MAX_STABILITY_N: usize = 30;

const R0_OPTIMUM_TOL: f64 = 1e-9;
const SIMPLEX_EPS: f64 = 1e-11;
const WITNESS_STRICT_TOL: f64 = 1e-10;

/// A complementary support pattern; bit `i` set means `i ∈ α` (x-side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SupportPattern {
    mask: u32,
    n: usize,
}

impl SupportPattern {
    pub fn new(mask: u32, n: usize) -> Self {
        debug_assert!(n <= 32 && (n == 32 || mask >> n == 0));
        Self { mask, n }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Indices on the x-side.
    pub fn alpha(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// All `2ⁿ` patterns, starting from `α = {0..n}` and ending with `α = ∅`.
    pub fn all(n: usize) -> impl Iterator<Item = SupportPattern> {
        (0..1u32 << n).rev().map(move |mask| SupportPattern { mask, n })
    }

    /// `M_α`: column `i` from `A` when `i ∈ α`, from `B` otherwise.
    pub fn system_matrix(&self, a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_columns(self.n, self.n, |i| if self.contains(i) { a.column(i) } else { b.column(i) })
    }

    /// Splits a solution `z` of `M_α z = q` into `(x, y)`.
    pub fn split(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; self.n];
        let mut y = vec![0.0; self.n];
        for (i, &v) in z.iter().enumerate() {
            if self.contains(i) {
                x[i] = v;
            } else {
                y[i] = v;
            }
        }
        (x, y)
    }

    /// Derivative of `Θ(x, y) = (x ⊓ y, Ax + By)` at a strictly complementary
    /// point with this support: selector rows (`y_i` for `i ∈ α`, `x_i` otherwise)
    /// stacked over `[A B]`.
    pub fn theta_jacobian(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let n = self.n;
        let mut j = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let col = if self.contains(i) { n + i } else { i };
            j[(i, col)] = 1.0;
            for c in 0..n {
                j[(n + i, c)] = a[(i, c)];
                j[(n + i, n + c)] = b[(i, c)];
            }
        }
        j
    }
}

/// A solution of `HLCP(A, B, q)` on ℝⁿ with the pattern it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct HlcpSolution {
    pub x: Element,
    pub y: Element,
    pub pattern: SupportPattern,
}

fn rn_pair(a: &LinearOperator, b: &LinearOperator, max_n: usize) -> Result<usize> {
    if !a.algebra().descriptor().is_rn() {
        return Err(invalid(format!("pair analysis needs the R^n algebra, got {}", a.algebra().descriptor())));
    }
    if b.algebra() != a.algebra() {
        return Err(invalid("A and B act on different algebras"));
    }
    let n = a.algebra().dim();
    if n > max_n {
        return Err(Error::Capacity { n, max: max_n });
    }
    Ok(n)
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(u, v)| (u - v).abs() <= 1e-9 * scale)
}

/// Enumerates every solution of `x ⊓ y = 0, Ax + By = q` on ℝⁿ.
///
/// A pattern contributes when `|det M_α| > strict_tol` and the solved components
/// are all `≥ -strict_tol` (tiny negatives are clamped to zero). Solutions found
/// by several patterns are reported once.
pub fn brute_force_hlcp(
    a: &LinearOperator,
    b: &LinearOperator,
    q: &Element,
    strict_tol: f64,
) -> Result<Vec<HlcpSolution>> {
    let n = rn_pair(a, b, MAX_ENUMERATION_N)?;
    if q.algebra() != a.algebra() {
        return Err(invalid("right-hand side lives in a different algebra"));
    }
    let alg = a.algebra();
    let mut found: Vec<(Vec<f64>, HlcpSolution)> = Vec::new();
    for pat in SupportPattern::all(n) {
        let m = pat.system_matrix(a.matrix(), b.matrix());
        let Ok(lu) = Lu::factor_with_threshold(&m, 0.0) else { continue };
        if !(lu.det().abs() > strict_tol) {
            continue;
        }
        let mut z = lu.solve(q.coords());
        if z.iter().any(|&v| !(v >= -strict_tol)) {
            continue;
        }
        z.iter_mut().for_each(|v| *v = v.max(0.0));
        let (x, y) = pat.split(&z);
        let key: Vec<f64> = x.iter().chain(&y).copied().collect();
        if found.iter().any(|(k, _)| same_point(k, &key)) {
            continue;
        }
        let sol = HlcpSolution { x: alg.element(x)?, y: alg.element(y)?, pattern: pat };
        found.push((key, sol));
    }
    Ok(found.into_iter().map(|(_, s)| s).collect())
}

/// Outcome of the R₀ test; a failing pair carries a nonzero solution of `HLCP(A, B, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct R0Verdict {
    pub is_r0: bool,
    pub witness: Option<(Element, Element)>,
}

/// Decides whether zero is the only solution of `HLCP(A, B, 0)`.
///
/// For every pattern the LP `max Σz s.t. M_α z = 0, 0 ≤ z ≤ 1` is solved by a
/// bounded-variable simplex; a positive optimum is a nonzero witness.
pub fn is_r0_pair(a: &LinearOperator, b: &LinearOperator) -> Result<R0Verdict> {
    let n = rn_pair(a, b, MAX_ENUMERATION_N)?;
    let alg = a.algebra();
    for pat in SupportPattern::all(n) {
        let m = pat.system_matrix(a.matrix(), b.matrix());
        if let Some(z) = cone_kernel_witness(&m)? {
            let (x, y) = pat.split(&z);
            return Ok(R0Verdict { is_r0: false, witness: Some((alg.element(x)?, alg.element(y)?)) });
        }
    }
    Ok(R0Verdict { is_r0: true, witness: None })
}

/// Maximizes `Σz` over `{M z = 0, 0 ≤ z ≤ 1}`; returns the maximizer when the
/// optimum exceeds `1e-9`.
fn cone_kernel_witness(m: &Matrix) -> Result<Option<Vec<f64>>> {
    let n = m.cols();
    let mut lp = BoundedSimplex::new(m, vec![1.0; n]);
    lp.maximize()?;
    let z: Vec<f64> = lp.values()[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let total: f64 = z.iter().sum();
    Ok((total > R0_OPTIMUM_TOL).then_some(z))
}

/// Dense bounded-variable primal simplex for
/// `max cᵀz  s.t.  M z + a = 0,  0 ≤ z ≤ 1,  a = 0`,
/// started from the all-artificial basis, with Bland's rule.
struct BoundedSimplex {
    rows: usize,
    vars: usize,
    /// `B⁻¹ [M I]`, row-major `rows × vars`.
    tableau: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
}

impl BoundedSimplex {
    fn new(m: &Matrix, c: Vec<f64>) -> Self {
        let (rows, n) = (m.rows(), m.cols());
        let vars = n + rows;
        let mut tableau = vec![0.0; rows * vars];
        for i in 0..rows {
            for j in 0..n {
                tableau[i * vars + j] = m[(i, j)];
            }
            tableau[i * vars + n + i] = 1.0;
        }
        let mut cost = c;
        cost.resize(vars, 0.0);
        let mut upper = vec![1.0; n];
        upper.resize(vars, 0.0);
        let basis: Vec<usize> = (n..vars).collect();
        let mut is_basic = vec![false; vars];
        basis.iter().for_each(|&j| is_basic[j] = true);
        Self { rows, vars, tableau, cost, lower: vec![0.0; vars], upper, value: vec![0.0; vars], basis, is_basic }
    }

    fn values(&self) -> &[f64] {
        &self.value
    }

    fn t(&self, i: usize, j: usize) -> f64 {
        self.tableau[i * self.vars + j]
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        self.cost[j] - (0..self.rows).map(|i| self.cost[self.basis[i]] * self.t(i, j)).sum::<f64>()
    }

    fn maximize(&mut self) -> Result<()> {
        let limit = 50 * (self.vars + 1) * (self.vars + 1);
        for _ in 0..limit {
            // Bland: lowest-index improving nonbasic variable
            let entering = (0..self.vars).find_map(|j| {
                if self.is_basic[j] || self.upper[j] - self.lower[j] <= 0.0 {
                    return None;
                }
                let d = self.reduced_cost(j);
                let at_lower = self.value[j] <= self.lower[j];
                if at_lower && d > SIMPLEX_EPS {
                    Some((j, 1.0))
                } else if !at_lower && d < -SIMPLEX_EPS {
                    Some((j, -1.0))
                } else {
                    None
                }
            });
            let Some((j, dir)) = entering else { return Ok(()) };

            // ratio test; ties go to the lowest-index basic variable
            let mut block: Option<(usize, f64, f64)> = None;
            for i in 0..self.rows {
                let delta = -dir * self.t(i, j);
                let bv = self.basis[i];
                let room = if delta < -SIMPLEX_EPS {
                    (self.value[bv] - self.lower[bv]) / -delta
                } else if delta > SIMPLEX_EPS {
                    (self.upper[bv] - self.value[bv]) / delta
                } else {
                    continue;
                };
                let room = room.max(0.0);
                let replace = match block {
                    None => true,
                    Some((r, _, best)) => room < best || (room == best && bv < self.basis[r]),
                };
                if replace {
                    block = Some((i, delta, room));
                }
            }
            let range = self.upper[j] - self.lower[j];
            let (theta, leave) = match block {
                Some((r, delta, room)) if room < range => (room, Some((r, delta))),
                _ => (range, None),
            };

            for i in 0..self.rows {
                let bv = self.basis[i];
                self.value[bv] += -dir * self.t(i, j) * theta;
            }
            self.value[j] += dir * theta;

            if let Some((r, delta)) = leave {
                let out = self.basis[r];
                self.value[out] = if delta < 0.0 { self.lower[out] } else { self.upper[out] };
                self.pivot(r, j);
            } else {
                // bound flip
                self.value[j] = if dir > 0.0 { self.upper[j] } else { self.lower[j] };
            }
        }
        Err(Error::NumericFailure { reason: "bounded simplex did not terminate".into(), iterations: limit })
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let vars = self.vars;
        let p = self.t(r, j);
        for c in 0..vars {
            self.tableau[r * vars + c] /= p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t(i, j);
            if f != 0.0 {
                for c in 0..vars {
                    self.tableau[i * vars + c] -= f * self.tableau[r * vars + c];
                }
            }
        }
        let out = self.basis[r];
        self.is_basic[out] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }
}

/// Result of a degree computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: i64,
    pub samples_used: usize,
    pub solutions_per_sample: Vec<usize>,
    pub degenerate_retries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeOptions {
    pub samples: usize,
    pub seed: u64,
    /// Solved components must exceed this for a sample to count as generic.
    pub genericity_tol: f64,
    pub max_resamples: usize,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        Self { samples: 3, seed: 0, genericity_tol: 1e-7, max_resamples: 20 }
    }
}

/// Outcome of enumerating one generic right-hand side.
enum SampleOutcome {
    Generic { degree: i64, solutions: usize },
    Degenerate,
}

/// HLCP-degree of an R₀ pair: the index at zero of `Θ(x, y) = (x ⊓ y, Ax + By)`.
pub fn hlcp_degree(a: &LinearOperator, b: &LinearOperator, samples: usize, seed: u64) -> Result<DegreeReport> {
    hlcp_degree_with(a, b, &DegreeOptions { samples, seed, ..DegreeOptions::default() })
}

/// Computes the degree as `Σ sign det Θ'` over the solutions of `Θ(z) = (0, p)`
/// for seeded generic `p`, requiring every accepted sample to agree.
///
/// Orientation: the domain of `Θ` is ordered `(y, x)`. With that order
/// `deg(I, −M)` coincides with the LCP-degree of `M` for every `n`; the
/// `(x, y)` order differs by a factor `(−1)ⁿ`.
pub fn hlcp_degree_with(a: &LinearOperator, b: &LinearOperator, opts: &DegreeOptions) -> Result<DegreeReport> {
    let n = rn_pair(a, b, MAX_DEGREE_N)?;
    if opts.samples == 0 {
        return Err(invalid("degree computation needs at least one sample"));
    }
    if !is_r0_pair(a, b)?.is_r0 {
        return Err(invalid("degree is only defined for R0 pairs"));
    }
    let orientation: i64 = if n % 2 == 0 { 1 } else { -1 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut retries = 0;
    let mut degrees = Vec::with_capacity(opts.samples);
    let mut counts = Vec::with_capacity(opts.samples);
    while degrees.len() < opts.samples {
        let p: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        match degree_sample(a.matrix(), b.matrix(), &p, opts.genericity_tol) {
            SampleOutcome::Generic { degree, solutions } => {
                degrees.push(orientation * degree);
                counts.push(solutions);
            }
            SampleOutcome::Degenerate => {
                retries += 1;
                if retries > opts.max_resamples {
                    return Err(Error::DegeneratePair { retries });
                }
            }
        }
    }
    if degrees.iter().any(|&d| d != degrees[0]) {
        return Err(Error::NumericFailure {
            reason: format!("degree samples disagree: {degrees:?}"),
            iterations: degrees.len(),
        });
    }
    Ok(DegreeReport { degree: degrees[0], samples_used: degrees.len(), solutions_per_sample: counts, degenerate_retries: retries })
}

fn degree_sample(a: &Matrix, b: &Matrix, p: &[f64], genericity_tol: f64) -> SampleOutcome {
    let n = p.len();
    let mut degree = 0;
    let mut solutions = 0;
    for pat in SupportPattern::all(n) {
        let m = pat.system_matrix(a, b);
        let Ok(lu) = Lu::factor(&m) else { continue };
        let z = lu.solve(p);
        let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
        if zmin < -genericity_tol {
            continue;
        }
        if zmin <= genericity_tol || !zmin.is_finite() {
            return SampleOutcome::Degenerate;
        }
        let jac = pat.theta_jacobian(a, b);
        match Lu::factor(&jac) {
            Ok(l) => degree += i64::from(l.det_sign()),
            Err(_) => return SampleOutcome::Degenerate,
        }
        solutions += 1;
    }
    SampleOutcome::Generic { degree, solutions }
}

/// LCP-degree of an R₀ matrix `M`: `Σ sign det M_αα` over the solutions of
/// `LCP(M, q)` for generic `q` (support `α` of `x`), using principal pivots.
pub fn lcp_degree(m: &LinearOperator, samples: usize, seed: u64) -> Result<DegreeReport> {
    let id = LinearOperator::identity(m.algebra());
    let n = rn_pair(m, &id, MAX_DEGREE_N)?;
    if samples == 0 {
        return Err(invalid("degree computation needs at least one sample"));
    }
    if !is_r0_pair(&id, &m.negated())?.is_r0 {
        return Err(invalid("LCP-degree is only defined for R0 matrices"));
    }
    let opts = DegreeOptions::default();
    let mm = m.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut retries = 0;
    let mut degrees = Vec::new();
    let mut counts = Vec::new();
    'sample: while degrees.len() < samples {
        let q: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut degree = 0;
        let mut count = 0;
        for pat in SupportPattern::all(n) {
            let alpha = pat.alpha();
            let beta: Vec<usize> = (0..n).filter(|i| !pat.contains(*i)).collect();
            // x_α solves M_αα x_α = −q_α; w_β = M_βα x_α + q_β
            let (xa, sign) = if alpha.is_empty() {
                (Vec::new(), 1)
            } else {
                let maa = mm.select(&alpha, &alpha);
                let Ok(lu) = Lu::factor(&maa) else { continue };
                let rhs: Vec<f64> = alpha.iter().map(|&i| -q[i]).collect();
                (lu.solve(&rhs), lu.det_sign())
            };
            let wb: Vec<f64> = beta
                .iter()
                .map(|&i| alpha.iter().zip(&xa).map(|(&j, v)| mm[(i, j)] * v).sum::<f64>() + q[i])
                .collect();
            let lo = xa.iter().chain(&wb).copied().fold(f64::INFINITY, f64::min);
            if lo < -opts.genericity_tol {
                continue;
            }
            if lo <= opts.genericity_tol {
                retries += 1;
                if retries > opts.max_resamples {
                    return Err(Error::DegeneratePair { retries });
                }
                continue 'sample;
            }
            degree += i64::from(sign);
            count += 1;
        }
        degrees.push(degree);
        counts.push(count);
    }
    if degrees.iter().any(|&d| d != degrees[0]) {
        return Err(Error::NumericFailure {
            reason: format!("degree samples disagree: {degrees:?}"),
            iterations: degrees.len(),
        });
    }
    Ok(DegreeReport { degree: degrees[0], samples_used: degrees.len(), solutions_per_sample: counts, degenerate_retries: retries })
}

/// Cofactor expansion along the first row.
fn det_expansion(m: &Matrix) -> f64 {
    let n = m.rows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => {
            let rows: Vec<usize> = (1..n).collect();
            let mut det = 0.0;
            for c in 0..n {
                let v = m[(0, c)];
                if v == 0.0 {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
                let minor = det_expansion(&m.select(&rows, &cols));
                det += if c % 2 == 0 { v * minor } else { -v * minor };
            }
            det
        }
    }
}

/// True iff every principal minor of `m` is positive.
///
/// Minors are expanded exactly by cofactors for `n ≤ 8` and through LU beyond.
pub fn is_p_matrix(m: &Matrix) -> Result<bool> {
    if !m.is_square() {
        return Err(invalid("P-matrix test needs a square matrix"));
    }
    let n = m.rows();
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity { n, max: MAX_ENUMERATION_N });
    }
    for mask in 1..1u32 << n {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = m.select(&idx, &idx);
        let minor = if n <= 8 { det_expansion(&sub) } else { sub.det() };
        if !(minor > 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_invertible(m: &Matrix) -> bool {
    let scale: f64 = (0..m.rows()).map(|i| crate::linalg::norm2(m.row(i))).product();
    m.det().abs() > 1e-12 * scale
}

/// P-pair test on ℝⁿ: `A` and `B` invertible and `−B⁻¹A` a P-matrix.
pub fn is_p_pair(a: &LinearOperator, b: &LinearOperator) -> Result<bool> {
    rn_pair(a, b, MAX_ENUMERATION_N)?;
    if !is_invertible(a.matrix()) || !is_invertible(b.matrix()) {
        return Ok(false);
    }
    let lu = Lu::factor_with_threshold(b.matrix(), 0.0)?;
    let c = lu.solve_matrix(a.matrix()).scaled(-1.0);
    is_p_matrix(&c)
}

/// Checks that `p` certifies the R-property: `HLCP(A, B, p)` has exactly one
/// solution and it satisfies `x + y > 0`.
pub fn verify_r_pair_witness(a: &LinearOperator, b: &LinearOperator, p: &Element) -> Result<bool> {
    rn_pair(a, b, MAX_DEGREE_N)?;
    if !is_r0_pair(a, b)?.is_r0 {
        return Err(invalid("R-pair witness check needs an R0 pair"));
    }
    let sols = brute_force_hlcp(a, b, p, WITNESS_STRICT_TOL)?;
    let [sol] = sols.as_slice() else { return Ok(false) };
    Ok(sol.x.coords().iter().zip(sol.y.coords()).all(|(x, y)| x + y > WITNESS_STRICT_TOL))
}

/// Positive stability via the Lyapunov equation `AᵀP + PA = I`: true iff the
/// equation has a unique solution and that solution is positive definite.
pub fn is_positive_stable(a: &Matrix) -> Result<bool> {
    if !a.is_square() {
        return Err(invalid("positive-stability test needs a square matrix"));
    }
    let n = a.rows();
    if n > MAX_STABILITY_N {
        return Err(Error::Capacity { n, max: MAX_STABILITY_N });
    }
    // row-major vec: vec(AᵀP) = (Aᵀ ⊗ I) vec(P), vec(PA) = (I ⊗ Aᵀ) vec(P)
    let nn = n * n;
    let mut k = Matrix::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for l in 0..n {
                k[(row, l * n + j)] += a[(l, i)];
                k[(row, i * n + l)] += a[(l, j)];
            }
        }
    }
    let Ok(lu) = Lu::factor(&k) else { return Ok(false) };
    let rhs: Vec<f64> = (0..nn).map(|r| if r / n == r % n { 1.0 } else { 0.0 }).collect();
    let p = Matrix::from_row_major(n, n, lu.solve(&rhs))?;
    let eig = symmetric_eigen(&p)?;
    Ok(eig.values.last().is_some_and(|&l| l > 0.0))
}

/// All solutions of the scalar system `ax + by = q, xy = w, x, y ≥ 0`.
///
/// Fails when `w < 0` or when the solution set is a continuum (e.g. `a = b = q = 0`).
pub fn whlcp_1d_oracle(a: f64, b: f64, w: f64, q: f64) -> Result<Vec<(f64, f64)>> {
    if !(w >= 0.0) {
        return Err(invalid("the scalar weight must be nonnegative"));
    }
    let continuum = || Err(invalid("the scalar system has infinitely many solutions"));
    if a == 0.0 && b == 0.0 {
        return if q != 0.0 { Ok(Vec::new()) } else { continuum() };
    }
    if a == 0.0 || b == 0.0 {
        // one variable is pinned by the linear equation
        let (coef, swap) = if a == 0.0 { (b, true) } else { (a, false) };
        let v = q / coef;
        let pair = |u: f64, v: f64| if swap { (u, v) } else { (v, u) };
        return if v < 0.0 {
            Ok(Vec::new())
        } else if v > 0.0 {
            Ok(vec![pair(w / v, v)])
        } else if w > 0.0 {
            Ok(Vec::new())
        } else {
            continuum()
        };
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut push = |x: f64, y: f64| {
        if x >= 0.0 && y >= 0.0 && !out.iter().any(|&(u, v)| same_point(&[u, v], &[x, y])) {
            out.push((x, y));
        }
    };
    if w == 0.0 {
        push(0.0, q / b);
        push(q / a, 0.0);
        return Ok(out);
    }
    // a x² − q x + b w = 0, with y = w / x
    let disc = q * q - 4.0 * a * b * w;
    if disc < 0.0 {
        return Ok(out);
    }
    let bq = -q;
    let h = -0.5 * (bq + if bq >= 0.0 { 1.0 } else { -1.0 } * libm::sqrt(disc));
    for x in [h / a, b * w / h] {
        if x > 0.0 {
            push(x, w / x);
        }
    }
    Ok(out)
}
