use jordan_wlcp_core::algebra::pack_symmetric;
use jordan_wlcp_core::pairs::{brute_force_hlcp, whlcp_1d_oracle};
use jordan_wlcp_core::sampling::{normal_matrix, random_element, random_p_matrix, random_spectral_element};
use jordan_wlcp_core::solver::{smoothed_residual, solve_all_starts, solve_from};
use jordan_wlcp_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar(a: f64, b: f64, w: f64, q: f64) -> PairProblem {
    let r1 = Algebra::rn(1).unwrap();
    let op = |v: f64| LinearOperator::new(&r1, Matrix::from_rows(&[[v]]).unwrap()).unwrap();
    PairProblem::new(op(a), op(b), r1.element(vec![w]).unwrap(), r1.element(vec![q]).unwrap()).unwrap()
}

fn algebras() -> Vec<Algebra> {
    vec![
        Algebra::rn(4).unwrap(),
        Algebra::spin(4).unwrap(),
        Algebra::sym(3).unwrap(),
        Algebra::new(AlgebraDescriptor::Product(vec![AlgebraDescriptor::Rn(2), AlgebraDescriptor::Spin(3)])).unwrap(),
    ]
}

fn random_problem(alg: &Algebra, rng: &mut ChaCha8Rng) -> PairProblem {
    let d = alg.dim();
    let a = LinearOperator::new(alg, normal_matrix(d, d, rng)).unwrap();
    let b = LinearOperator::new(alg, normal_matrix(d, d, rng)).unwrap();
    let w = random_spectral_element(alg, 0.0, 1.0, rng).unwrap();
    PairProblem::new(a, b, w, random_element(alg, rng)).unwrap()
}

#[test]
fn scalar_instance_matches_closed_form() {
    let p = scalar(1.0, 1.0, 1.0, 2.0);
    let r = solve(&p, &SolverConfig::default()).unwrap();
    assert!(r.converged());
    assert!((r.x.coords()[0] - 1.0).abs() <= 1e-8);
    assert!((r.y.coords()[0] - 1.0).abs() <= 1e-8);
    assert!(r.iterations <= 25);

    let cfg = SolverConfig { starts: 6, seed: 4, ..SolverConfig::default() };
    for r in solve_all_starts(&p, &cfg).unwrap() {
        assert!(r.converged(), "start {} ended {:?}", r.start, r.status);
        assert!((r.x.coords()[0] - 1.0).abs() <= 1e-4);
    }
}

#[test]
fn infeasible_scalar_instance_is_reported() {
    let p = scalar(1.0, 1.0, 0.0, -1.0);
    let cfg = SolverConfig { starts: 4, ..SolverConfig::default() };
    let r = solve(&p, &cfg).unwrap();
    assert_ne!(r.status, SolveStatus::Converged);
    assert!(r.residuals.max() > 1e-3);
}

#[test]
fn scalar_instances_agree_with_the_quadratic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let a = rng.gen_range(0.5..2.0);
        let b = rng.gen_range(0.5..2.0);
        let w = rng.gen_range(0.1..1.0);
        let q = rng.gen_range(-3.0..3.0);
        let p = scalar(a, b, w, q);
        let expected = whlcp_1d_oracle(a, b, w, q).unwrap();
        let cfg = SolverConfig { starts: 4, seed: 1, ..SolverConfig::default() };
        let r = solve(&p, &cfg).unwrap();
        if expected.is_empty() {
            assert!(!r.converged());
            continue;
        }
        assert!(r.converged(), "a={a} b={b} w={w} q={q}: {:?}", r.status);
        let (x, y) = (r.x.coords()[0], r.y.coords()[0]);
        assert!(expected.iter().any(|&(ex, ey)| (x - ex).abs() < 1e-6 && (y - ey).abs() < 1e-6));
    }
}

#[test]
fn lyapunov_pair_on_sym2() {
    let l = lyapunov_transform(&Matrix::diag(&[1.0, 2.0])).unwrap();
    let alg = l.algebra().clone();
    let p = PairProblem::new(l.negated(), LinearOperator::identity(&alg), alg.unit(), alg.zero()).unwrap();
    let r = solve(&p, &SolverConfig::default()).unwrap();
    assert!(r.converged());
    let expect_x = pack_symmetric(&Matrix::diag(&[core::f64::consts::FRAC_1_SQRT_2, 0.5]));
    let expect_y = pack_symmetric(&Matrix::diag(&[core::f64::consts::SQRT_2, 2.0]));
    for (u, v) in r.x.coords().iter().zip(&expect_x).chain(r.y.coords().iter().zip(&expect_y)) {
        assert!((u - v).abs() < 1e-6);
    }
    let xy = r.x.jordan_product(&r.y).unwrap();
    assert!((&xy - &alg.unit()).norm() < 1e-8);
    assert!(r.x.min_eigenvalue().unwrap() > 0.0 && r.y.min_eigenvalue().unwrap() > 0.0);
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let algs = algebras();
    for k in 0..100 {
        let alg = &algs[k % algs.len()];
        let p = random_problem(alg, &mut rng);
        let x = random_element(alg, &mut rng);
        let y = random_element(alg, &mut rng);
        let mu = rng.gen_range(0.1..2.0);
        let j = assemble_jacobian(&x, &y, &p, mu).unwrap();
        let d = alg.dim();
        let h = 1e-6;
        for c in 0..2 * d {
            let shift = |s: f64| {
                let mut xs = x.clone();
                let mut ys = y.clone();
                let basis = alg.basis(c % d);
                if c < d {
                    xs.axpy(s, &basis);
                } else {
                    ys.axpy(s, &basis);
                }
                smoothed_residual(&xs, &ys, &p, mu).unwrap()
            };
            let fp = shift(h);
            let fm = shift(-h);
            for r in 0..2 * d {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - j[(r, c)]).abs() <= 1e-5, "{alg:?} entry ({r},{c}): fd {fd} vs {}", j[(r, c)]);
            }
        }
    }
}

#[test]
fn jacobian_at_origin_has_identity_top_blocks() {
    for alg in algebras() {
        let d = alg.dim();
        let p = PairProblem::new(LinearOperator::identity(&alg), LinearOperator::zero(&alg), alg.zero(), alg.unit()).unwrap();
        let j = assemble_jacobian(&alg.zero(), &alg.zero(), &p, 1.0).unwrap();
        for r in 0..d {
            for c in 0..d {
                let id = if r == c { 1.0 } else { 0.0 };
                assert!((j[(r, c)] - id).abs() < 1e-14);
                assert!((j[(r, d + c)] - id).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn converged_reports_certify_independently() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..6 {
        let alg = Algebra::rn(n).unwrap();
        let m = LinearOperator::new(&alg, random_p_matrix(n, &mut rng)).unwrap();
        let w = random_spectral_element(&alg, 0.1, 1.0, &mut rng).unwrap();
        let p = lcp_embedding(&m, w, random_element(&alg, &mut rng), LcpConvention::NegatedM).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert!(r.converged());
        let bound = 1e6 * (1.0 + p.q().norm() + p.w().norm());
        assert!(r.peak_norm() < bound);
        let again = residuals(&r.x, &r.y, &p).unwrap();
        assert!(again.within(1e-8));
        assert_eq!(again, r.residuals);
        // interior weights force interior solutions
        assert!(r.x.min_eigenvalue().unwrap() > 0.0);
        assert!(r.y.min_eigenvalue().unwrap() > 0.0);
        for pair in r.trace.windows(2) {
            if pair[0].mu == pair[1].mu {
                assert!(pair[1].merit <= pair[0].merit);
            }
        }
    }
}

#[test]
fn interior_weights_give_interior_solutions_on_every_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for alg in algebras() {
        // (−L, I) with L positive definite keeps the problem well posed
        let d = alg.dim();
        let g = normal_matrix(d, d, &mut rng);
        let l = g.transpose().matmul(&g).add(&Matrix::identity(d));
        let a = LinearOperator::new(&alg, l).unwrap().negated();
        let w = random_spectral_element(&alg, 0.1, 1.0, &mut rng).unwrap();
        let p = PairProblem::new(a, LinearOperator::identity(&alg), w, random_element(&alg, &mut rng)).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert!(r.converged(), "{alg:?}: {:?} {:?}", r.status, r.residuals);
        assert!(r.x.min_eigenvalue().unwrap() > 0.0);
        assert!(r.y.min_eigenvalue().unwrap() > 0.0);
    }
}

#[test]
fn scalar_path_follows_the_weight() {
    let p = scalar(1.0, 1.0, 1.0, 2.0);
    let cfg = SolverConfig::default();
    let path = path_trace(&p, &cfg, &[1.0, 0.5, 0.25]).unwrap();
    let plain = solve(&p, &cfg).unwrap();
    assert_eq!(path.levels[0], plain);
    for (t, r) in path.schedule.iter().zip(&path.levels) {
        assert!(r.converged());
        let (x, y) = (r.x.coords()[0], r.y.coords()[0]);
        assert!((x * y - t).abs() < 1e-8);
        assert!((x + y - 2.0).abs() < 1e-8);
        assert!(x > 0.0 && y > 0.0);
    }
    assert!(path.limit.converged());
    let (x, y) = (path.limit.x.coords()[0], path.limit.y.coords()[0]);
    assert!(((x - 2.0).abs() < 1e-6 && y.abs() < 1e-6) || ((y - 2.0).abs() < 1e-6 && x.abs() < 1e-6));
}

#[test]
fn p_pair_path_reaches_the_enumerated_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let alg = Algebra::rn(4).unwrap();
    let m = LinearOperator::new(&alg, random_p_matrix(4, &mut rng)).unwrap();
    let w = random_spectral_element(&alg, 0.5, 1.5, &mut rng).unwrap();
    let q = random_element(&alg, &mut rng);
    let p = lcp_embedding(&m, w, q.clone(), LcpConvention::NegatedM).unwrap();
    let schedule: Vec<f64> = (0..13).map(|k| 0.5f64.powi(k)).collect();
    let path = path_trace(&p, &SolverConfig::default(), &schedule).unwrap();
    assert!(path.levels.iter().all(|r| r.converged()));
    let exact = brute_force_hlcp(p.a(), p.b(), &q, 1e-12).unwrap();
    assert_eq!(exact.len(), 1);
    let dx = (&path.limit.x - &exact[0].x).norm();
    let dy = (&path.limit.y - &exact[0].y).norm();
    assert!(dx <= 1e-6 && dy <= 1e-6, "dx {dx} dy {dy}");
}

#[test]
fn weighted_solution_is_a_zero_of_the_weighted_fb_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let alg = Algebra::sym(3).unwrap();
    let l = lyapunov_transform(&Matrix::from_rows(&[[2.0, 1.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.0, 3.0]]).unwrap()).unwrap();
    let w = random_spectral_element(&alg, 0.2, 1.0, &mut rng).unwrap();
    let p = PairProblem::new(l.negated(), LinearOperator::identity(&alg), w.clone(), random_element(&alg, &mut rng)).unwrap();
    let r = solve(&p, &SolverConfig::default()).unwrap();
    assert!(r.converged());
    assert!(weighted_fb_map(&r.x, &r.y, &w).unwrap().norm() < 1e-7);
    let start = alg.unit();
    let again = solve_from(&p, &SolverConfig::default(), &start, &start).unwrap();
    assert_eq!(again.x, r.x);
}
