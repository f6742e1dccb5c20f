use jordan_wlcp_core::algebra::{pack_symmetric, unpack_symmetric};
use jordan_wlcp_core::linalg::symmetric_eigen;
use jordan_wlcp_core::*;
use proptest::prelude::*;

fn descriptors() -> Vec<AlgebraDescriptor> {
    use AlgebraDescriptor::*;
    vec![Rn(5), Spin(5), Sym(4), Product(vec![Rn(2), Spin(3)]), Product(vec![Sym(2), Rn(1), Spin(2)])]
}

fn element_strategy() -> impl Strategy<Value = (Algebra, Vec<f64>, Vec<f64>)> {
    (0..descriptors().len()).prop_flat_map(|k| {
        let alg = Algebra::new(descriptors()[k].clone()).unwrap();
        let d = alg.dim();
        (Just(alg), prop::collection::vec(-3.0..3.0f64, d), prop::collection::vec(-3.0..3.0f64, d))
    })
}

fn close(a: &Element, b: &Element, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm() + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn plus_and_minus_are_orthogonal((alg, u, _v) in element_strategy()) {
        let x = alg.element(u).unwrap();
        let p = x.plus().unwrap();
        let m = x.minus().unwrap();
        prop_assert!(close(&(&p - &m), &x, 1e-12));
        prop_assert!(p.inner_product(&m).unwrap().abs() <= 1e-10 * (1.0 + x.norm()).powi(2));
        prop_assert!(p.jordan_product(&m).unwrap().norm() <= 1e-10 * (1.0 + x.norm()).powi(2));
        prop_assert!(p.min_eigenvalue().unwrap() >= -1e-12 && m.min_eigenvalue().unwrap() >= -1e-12);
    }

    #[test]
    fn sqrt_of_square_is_abs((alg, u, _v) in element_strategy()) {
        let x = alg.element(u).unwrap();
        let a = x.abs().unwrap();
        prop_assert!(close(&x.square().sqrt().unwrap(), &a, 1e-9));
        prop_assert!(close(&a, &(&x.plus().unwrap() + &x.minus().unwrap()), 1e-12));
    }

    #[test]
    fn decomposition_reconstructs_on_a_jordan_frame((alg, u, _v) in element_strategy()) {
        let x = alg.element(u).unwrap();
        let sd = x.spectral_decompose().unwrap();
        prop_assert_eq!(sd.frame.len(), alg.rank());
        prop_assert!(close(&sd.reconstruct(), &x, 1e-12));
        prop_assert!(sd.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let mut total = alg.zero();
        for (i, fi) in sd.frame.iter().enumerate() {
            total.axpy(1.0, fi);
            prop_assert!(close(&fi.square(), fi, 1e-10));
            for fj in &sd.frame[i + 1..] {
                prop_assert!(fi.jordan_product(fj).unwrap().norm() <= 1e-10);
            }
        }
        prop_assert!(close(&total, &alg.unit(), 1e-10));
        // trace form: ‖x‖² = Σ λᵢ²
        let s: f64 = sd.eigenvalues.iter().map(|l| l * l).sum();
        prop_assert!((s - x.norm().powi(2)).abs() <= 1e-9 * (1.0 + s));
    }

    #[test]
    fn multiplication_operator_is_symmetric((alg, u, v) in element_strategy()) {
        let x = alg.element(u).unwrap();
        let y = alg.element(v).unwrap();
        let l = x.lyapunov_operator();
        prop_assert!(l.sub(&l.transpose()).frobenius_norm() <= 1e-12 * (1.0 + l.frobenius_norm()));
        let ly = l.mul_vec(y.coords());
        let xy = x.jordan_product(&y).unwrap();
        for (a, b) in ly.iter().zip(xy.coords()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + x.norm() * y.norm()));
        }
        // associativity of the trace form: ⟨x∘y, e⟩ = ⟨x, y⟩
        let t = xy.inner_product(&alg.unit()).unwrap();
        prop_assert!((t - x.inner_product(&y).unwrap()).abs() <= 1e-10 * (1.0 + x.norm() * y.norm()));
        let lsum: f64 = xy.eigenvalues().unwrap().iter().sum();
        prop_assert!((lsum - t).abs() <= 1e-9 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn jordan_identity_holds((alg, u, v) in element_strategy()) {
        let x = alg.element(u).unwrap();
        let y = alg.element(v).unwrap();
        let x2 = x.square();
        let lhs = x.jordan_product(&x2.jordan_product(&y).unwrap()).unwrap();
        let rhs = x2.jordan_product(&x.jordan_product(&y).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-11));
    }

    #[test]
    fn sym_product_matches_matrix_arithmetic(a in prop::collection::vec(-2.0..2.0f64, 10), b in prop::collection::vec(-2.0..2.0f64, 10)) {
        let alg = Algebra::sym(4).unwrap();
        let x = alg.element(a).unwrap();
        let y = alg.element(b).unwrap();
        let xm = unpack_symmetric(4, x.coords());
        let ym = unpack_symmetric(4, y.coords());
        let want = xm.matmul(&ym).add(&ym.matmul(&xm)).scaled(0.5);
        let got = unpack_symmetric(4, x.jordan_product(&y).unwrap().coords());
        prop_assert!(want.sub(&got).frobenius_norm() <= 1e-12 * (1.0 + want.frobenius_norm()));
        // ⟨X, Y⟩ = tr(XY)
        let tr: f64 = (0..4).map(|i| xm.matmul(&ym)[(i, i)]).sum();
        prop_assert!((tr - x.inner_product(&y).unwrap()).abs() <= 1e-12 * (1.0 + tr.abs()));
        // eigenvalues agree with the matrix eigensolver
        let ev = symmetric_eigen(&xm).unwrap().values;
        for (l, m) in x.eigenvalues().unwrap().iter().zip(&ev) {
            prop_assert!((l - m).abs() <= 1e-10);
        }
        for (u, w) in pack_symmetric(&xm).iter().zip(x.coords()) {
            prop_assert!((u - w).abs() <= 1e-15 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn spin_spectrum_has_the_closed_form(v in prop::collection::vec(-2.0..2.0f64, 5)) {
        let alg = Algebra::spin(5).unwrap();
        let x = alg.element(v.clone()).unwrap();
        let r = v[1..].iter().map(|t| t * t).sum::<f64>().sqrt();
        let ev = x.eigenvalues().unwrap();
        prop_assert!((ev[0] - (v[0] + r)).abs() <= 1e-12 && (ev[1] - (v[0] - r)).abs() <= 1e-12);
    }
}

#[test]
fn sqrt_rejects_negative_spectrum() {
    let alg = Algebra::spin(3).unwrap();
    let x = alg.element(vec![0.0, 1.0, 0.0]).unwrap();
    assert!(matches!(x.sqrt(), Err(Error::Domain(_))));
    let tiny = alg.element(vec![-5e-11, 0.0, 0.0]).unwrap();
    assert_eq!(tiny.sqrt().unwrap().norm(), 0.0);
}

#[test]
fn cone_classes() {
    let alg = Algebra::sym(2).unwrap();
    let id = alg.unit();
    assert_eq!(id.cone_membership(1e-9).unwrap(), ConeClass::Interior);
    let e11 = alg.element(vec![1.0, 0.0, 0.0]).unwrap();
    assert_eq!(e11.cone_membership(1e-9).unwrap(), ConeClass::Boundary);
    assert_eq!((-&id).cone_membership(1e-9).unwrap(), ConeClass::Outside);
}

#[test]
fn mismatched_algebras_are_rejected() {
    let a = Algebra::rn(3).unwrap();
    let b = Algebra::spin(3).unwrap();
    assert!(matches!(a.unit().jordan_product(&b.unit()), Err(Error::InvalidInput(_))));
    assert!(a.element(vec![1.0]).is_err());
}
