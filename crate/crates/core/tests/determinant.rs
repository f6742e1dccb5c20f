//! det [[A, −B], [X, Y]] = det(AY + BX) whenever X and Y commute.

use jordan_wlcp_core::pairs::SupportPattern;
use jordan_wlcp_core::sampling::normal_matrix;
use jordan_wlcp_core::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn block(a: &Matrix, b: &Matrix, x: &Matrix, y: &Matrix) -> Matrix {
    let n = a.rows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
            m[(i, n + j)] = -b[(i, j)];
            m[(n + i, j)] = x[(i, j)];
            m[(n + i, n + j)] = y[(i, j)];
        }
    }
    m
}

/// c₀I + c₁T + c₂T² + c₃T³
fn poly(t: &Matrix, c: &[f64]) -> Matrix {
    let n = t.rows();
    let mut out = Matrix::zeros(n, n);
    let mut p = Matrix::identity(n);
    for &ck in c {
        out = out.add(&p.scaled(ck));
        p = p.matmul(t);
    }
    out
}

#[test]
fn block_determinant_formula_for_commuting_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let a = normal_matrix(n, n, &mut rng);
        let b = normal_matrix(n, n, &mut rng);
        let t = normal_matrix(n, n, &mut rng).scaled(0.5);
        let cx: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cy: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = poly(&t, &cx);
        let y = poly(&t, &cy);
        assert!(x.matmul(&y).sub(&y.matmul(&x)).frobenius_norm() <= 1e-10 * (1.0 + x.frobenius_norm() * y.frobenius_norm()));
        let lhs = block(&a, &b, &x, &y).det();
        let rhs = a.matmul(&y).add(&b.matmul(&x)).det();
        assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()).max(1e-300), "n={n}: {lhs} vs {rhs}");
    }
}

#[test]
fn non_commuting_factors_break_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut broke = 0;
    for _ in 0..20 {
        let [a, b, x, y] = [0; 4].map(|_| normal_matrix(3, 3, &mut rng));
        let lhs = block(&a, &b, &x, &y).det();
        let rhs = a.matmul(&y).add(&b.matmul(&x)).det();
        if (lhs - rhs).abs() > 1e-6 * lhs.abs().max(rhs.abs()) {
            broke += 1;
        }
    }
    assert!(broke >= 15);
}

#[test]
fn theta_derivative_agrees_with_the_formula() {
    // On a support pattern the selector rows are diagonal 0/1 matrices, which commute.
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in 1..6 {
        let a = normal_matrix(n, n, &mut rng);
        let b = normal_matrix(n, n, &mut rng);
        for pat in SupportPattern::all(n) {
            let sel: Vec<f64> = (0..n).map(|i| if pat.contains(i) { 1.0 } else { 0.0 }).collect();
            let d = Matrix::diag(&sel);
            let dc = Matrix::identity(n).sub(&d);
            // Θ' with columns ordered (x, y): rows [D_c, D; A, B]
            let j = pat.theta_jacobian(&a, &b);
            // det [[A, B], [D_c, D]] = det(AD + BD_c) up to the row-block swap
            let formula = a.matmul(&d).add(&b.matmul(&dc)).det();
            let sys = pat.system_matrix(&a, &b).det();
            assert!((formula - sys).abs() <= 1e-10 * (1.0 + sys.abs()));
            assert!((j.det().abs() - formula.abs()).abs() <= 1e-10 * (1.0 + formula.abs()));
        }
    }
}
