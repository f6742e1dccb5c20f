//! Seeded generators for test inputs: random elements, Jordan frames,
//! complementary pairs built on a shared frame, and random matrices with
//! prescribed structure.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{Algebra, Element};
use crate::error::Result;
use crate::linalg::Matrix;

pub fn normal_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn normal_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_row_major(rows, cols, normal_vec(rows * cols, rng)).expect("sized by construction")
}

/// Element with standard normal coordinates.
pub fn random_element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Element {
    Element::from_raw(alg, normal_vec(alg.dim(), rng))
}

/// Element whose eigenvalues are drawn uniformly from `[lo, hi)` on a random frame.
pub fn random_spectral_element<R: Rng + ?Sized>(alg: &Algebra, lo: f64, hi: f64, rng: &mut R) -> Result<Element> {
    let frame = random_frame(alg, rng)?;
    let mut x = alg.zero();
    for f in &frame {
        x.axpy(rng.gen_range(lo..hi), f);
    }
    Ok(x)
}

/// A Jordan frame taken from the spectral decomposition of a random element.
pub fn random_frame<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Result<Vec<Element>> {
    Ok(random_element(alg, rng).spectral_decompose()?.frame)
}

/// `x = Σ_{i∈S} aᵢfᵢ`, `y = Σ_{i∉S} bᵢfᵢ` on a random frame with a random
/// split `S` and coefficients in `[0, 2)`; such a pair is complementary.
pub fn frame_complementary_pair<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Result<(Element, Element)> {
    let frame = random_frame(alg, rng)?;
    let mut x = alg.zero();
    let mut y = alg.zero();
    for f in &frame {
        let c = rng.gen_range(0.0..2.0);
        if rng.gen_bool(0.5) {
            x.axpy(c, f);
        } else {
            y.axpy(c, f);
        }
    }
    Ok((x, y))
}

/// `x, y ⪰ 0` on a shared random frame with strictly positive eigenvalues in
/// `[lo, hi)`, so `x∘y` lies in the interior of the cone.
pub fn frame_interior_pair<R: Rng + ?Sized>(alg: &Algebra, lo: f64, hi: f64, rng: &mut R) -> Result<(Element, Element)> {
    let frame = random_frame(alg, rng)?;
    let mut x = alg.zero();
    let mut y = alg.zero();
    for f in &frame {
        x.axpy(rng.gen_range(lo..hi), f);
        y.axpy(rng.gen_range(lo..hi), f);
    }
    Ok((x, y))
}

/// `DᵀD + n·I + (S − Sᵀ)` with standard normal `D`, `S`: positive definite
/// (not necessarily symmetric), hence a P-matrix.
pub fn random_p_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let d = normal_matrix(n, n, rng);
    let s = normal_matrix(n, n, rng);
    d.transpose().matmul(&d).add(&Matrix::identity(n).scaled(n as f64)).add(&s.sub(&s.transpose()))
}
