//! Linear operators on an algebra, stored as dense matrices in the
//! coordinate basis, and the problem data `(A, B, w, q)` built from them.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{pack_symmetric, unpack_symmetric, Algebra, Element};
use crate::error::{invalid, Result};
use crate::linalg::Matrix;
use crate::maps::check_weight;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    algebra: Algebra,
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(algebra: &Algebra, matrix: Matrix) -> Result<Self> {
        let d = algebra.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(invalid(format!(
                "operator on {} must be {d}x{d}, got {}x{}",
                algebra.descriptor(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { algebra: algebra.clone(), matrix })
    }

    pub fn identity(algebra: &Algebra) -> Self {
        Self { algebra: algebra.clone(), matrix: Matrix::identity(algebra.dim()) }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self { algebra: algebra.clone(), matrix: Matrix::zeros(algebra.dim(), algebra.dim()) }
    }

    /// Materializes an operator from its action, one basis element at a time.
    pub fn from_action(algebra: &Algebra, mut action: impl FnMut(&Element) -> Element) -> Self {
        let d = algebra.dim();
        let matrix = Matrix::from_columns(d, d, |j| action(&algebra.basis(j)).into_coords());
        Self { algebra: algebra.clone(), matrix }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn negated(&self) -> Self {
        Self { algebra: self.algebra.clone(), matrix: self.matrix.scaled(-1.0) }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &self.algebra {
            return Err(invalid(format!(
                "operator on {} applied to an element of {}",
                self.algebra.descriptor(),
                x.algebra().descriptor()
            )));
        }
        Ok(Element::from_raw(&self.algebra, self.matrix.mul_vec(x.coords())))
    }
}

fn square_dim(m: &Matrix, what: &str) -> Result<usize> {
    if !m.is_square() || m.rows() == 0 {
        return Err(invalid(format!("{what} needs a nonempty square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m.rows())
}

/// `X ↦ A X + X Aᵀ` on Sym(n).
pub fn lyapunov_transform(a: &Matrix) -> Result<LinearOperator> {
    let n = square_dim(a, "Lyapunov transformation")?;
    let alg = Algebra::sym(n)?;
    let at = a.transpose();
    Ok(LinearOperator::from_action(&alg, |x| {
        let xm = unpack_symmetric(n, x.coords());
        let img = a.matmul(&xm).add(&xm.matmul(&at));
        Element::from_raw(&alg, pack_symmetric(&img))
    }))
}

/// `X ↦ X − B X Bᵀ` on Sym(n).
pub fn stein_transform(b: &Matrix) -> Result<LinearOperator> {
    let n = square_dim(b, "Stein transformation")?;
    let alg = Algebra::sym(n)?;
    let bt = b.transpose();
    Ok(LinearOperator::from_action(&alg, |x| {
        let xm = unpack_symmetric(n, x.coords());
        let img = xm.sub(&b.matmul(&xm).matmul(&bt));
        Element::from_raw(&alg, pack_symmetric(&img))
    }))
}

/// The data of `wHLCP(A, B, w, q)`: find `x, y ⪰ 0` with `x∘y = w` and `Ax + By = q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairProblem {
    a: LinearOperator,
    b: LinearOperator,
    w: Element,
    q: Element,
}

impl PairProblem {
    /// Checks that all four components share an algebra and that `w` lies in
    /// the cone up to `1e-9·(1+‖w‖)`.
    pub fn new(a: LinearOperator, b: LinearOperator, w: Element, q: Element) -> Result<Self> {
        let alg = a.algebra();
        if b.algebra() != alg || w.algebra() != alg || q.algebra() != alg {
            return Err(invalid("A, B, w and q must share one algebra"));
        }
        check_weight(&w)?;
        Ok(Self { a, b, w, q })
    }

    pub fn algebra(&self) -> &Algebra {
        self.a.algebra()
    }

    pub fn a(&self) -> &LinearOperator {
        &self.a
    }

    pub fn b(&self) -> &LinearOperator {
        &self.b
    }

    pub fn w(&self) -> &Element {
        &self.w
    }

    pub fn q(&self) -> &Element {
        &self.q
    }

    /// Same pair and right-hand side with a different weight.
    pub fn with_weight(&self, w: Element) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), w, self.q.clone())
    }

    /// `Ax + By − q` in coordinates.
    pub(crate) fn linear_residual_coords(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let ax = self.a.matrix().mul_vec(x);
        let by = self.b.matrix().mul_vec(y);
        ax.iter().zip(&by).zip(self.q.coords()).map(|((u, v), q)| u + v - q).collect()
    }
}

/// Which pair represents `LCP(M, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LcpConvention {
    /// `(A, B) = (−M, I)`: the linear equation reads `y = Mx + q`.
    #[default]
    NegatedM,
    /// `(A, B) = (I, −M)`: the linear equation reads `x − My = q`.
    IdentityFirst,
}

/// Embeds `LCP(M, q)` (weighted by `w`) as a pair problem.
pub fn lcp_embedding(m: &LinearOperator, w: Element, q: Element, convention: LcpConvention) -> Result<PairProblem> {
    let id = LinearOperator::identity(m.algebra());
    let (a, b) = match convention {
        LcpConvention::NegatedM => (m.negated(), id),
        LcpConvention::IdentityFirst => (id, m.negated()),
    };
    PairProblem::new(a, b, w, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::error::Error;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn apply_examples() {
        let r2 = Algebra::rn(2).unwrap();
        let x = r2.element(vec![3.0, 4.0]).unwrap();
        assert_eq!(LinearOperator::identity(&r2).apply(&x).unwrap(), x);
        let swap = LinearOperator::new(&r2, Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(swap.apply(&x).unwrap().coords(), &[4.0, 3.0]);
        assert_eq!(LinearOperator::zero(&r2).apply(&x).unwrap(), r2.zero());
        let other = Algebra::spin(2).unwrap().unit();
        assert!(matches!(swap.apply(&other), Err(Error::InvalidInput(_))));
        assert!(LinearOperator::new(&r2, Matrix::identity(3)).is_err());
    }

    #[test]
    fn lyapunov_examples() {
        let l = lyapunov_transform(&Matrix::identity(2)).unwrap();
        let i = l.algebra().unit();
        assert!(close(l.apply(&i).unwrap().coords(), &[2.0, 2.0, 0.0], 1e-15));

        let l = lyapunov_transform(&Matrix::diag(&[1.0, 2.0])).unwrap();
        let x = l.algebra().element(vec![3.0, 5.0, 0.0]).unwrap();
        assert!(close(l.apply(&x).unwrap().coords(), &[6.0, 20.0, 0.0], 1e-15));

        let l = lyapunov_transform(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(l.matrix(), &Matrix::zeros(6, 6));

        assert!(lyapunov_transform(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn stein_examples() {
        let s = stein_transform(&Matrix::zeros(2, 2)).unwrap();
        assert!(s.matrix().sub(&Matrix::identity(3)).frobenius_norm() < 1e-15);
        let s = stein_transform(&Matrix::identity(2)).unwrap();
        assert!(s.matrix().frobenius_norm() < 1e-15);
        let s = stein_transform(&Matrix::diag(&[0.5, 0.5])).unwrap();
        let i = s.algebra().unit();
        assert!(close(s.apply(&i).unwrap().coords(), &[0.75, 0.75, 0.0], 1e-15));
        assert!(stein_transform(&Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn lyapunov_matches_action_on_basis() {
        let a = Matrix::from_rows(&[[1.0, -2.0, 0.5], [0.3, 4.0, 1.0], [-1.0, 0.0, 2.0]]).unwrap();
        let l = lyapunov_transform(&a).unwrap();
        let alg = l.algebra().clone();
        for j in 0..alg.dim() {
            let xm = unpack_symmetric(3, alg.basis(j).coords());
            let direct = pack_symmetric(&a.matmul(&xm).add(&xm.matmul(&a.transpose())));
            assert!(close(&l.matrix().column(j), &direct, 1e-12));
        }
    }

    #[test]
    fn stein_output_is_symmetric() {
        let b = Matrix::from_rows(&[[0.2, 1.0], [-0.7, 0.4]]).unwrap();
        let s = stein_transform(&b).unwrap();
        let alg = s.algebra().clone();
        for j in 0..alg.dim() {
            let xm = unpack_symmetric(2, alg.basis(j).coords());
            let img = xm.sub(&b.matmul(&xm).matmul(&b.transpose()));
            assert!(img.sub(&img.transpose()).frobenius_norm() < 1e-15);
            assert!(close(&s.matrix().column(j), &pack_symmetric(&img), 1e-15));
        }
    }

    #[test]
    fn weight_outside_cone_is_rejected() {
        let r1 = Algebra::rn(1).unwrap();
        let id = LinearOperator::identity(&r1);
        let w = r1.element(vec![-1.0]).unwrap();
        let q = r1.element(vec![2.0]).unwrap();
        assert!(matches!(PairProblem::new(id.clone(), id, w, q), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn embedding_conventions() {
        let r2 = Algebra::rn(2).unwrap();
        let m = LinearOperator::identity(&r2);
        let q = r2.element(vec![1.0, -1.0]).unwrap();
        let p = lcp_embedding(&m, r2.zero(), q.clone(), LcpConvention::NegatedM).unwrap();
        assert_eq!(p.a().matrix(), &Matrix::identity(2).scaled(-1.0));
        assert_eq!(p.b().matrix(), &Matrix::identity(2));
        // x = (0,1), y = (1,0) satisfies y = x + q
        assert_eq!(p.linear_residual_coords(&[0.0, 1.0], &[1.0, 0.0]), vec![0.0, 0.0]);

        let p = lcp_embedding(&m, r2.zero(), q, LcpConvention::IdentityFirst).unwrap();
        assert_eq!(p.linear_residual_coords(&[1.0, 0.0], &[0.0, 1.0]), vec![0.0, 0.0]);
    }
}
