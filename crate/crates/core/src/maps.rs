//! Complementarity maps: the min map, the Fischer–Burmeister map and its
//! weighted variant, plus the residual triple used to certify solutions.

use alloc::format;

use crate::algebra::{Element, SpectralFn};
use crate::error::{invalid, Result};
use crate::operator::PairProblem;

/// `x ⊓ y = x − (x − y)⁺`.
pub fn min_map(x: &Element, y: &Element) -> Result<Element> {
    let d = x.try_sub(y)?;
    Ok(x - &d.spectral_map(SpectralFn::Plus)?)
}

/// `x + y − √(x² + y²)`.
pub fn fb_map(x: &Element, y: &Element) -> Result<Element> {
    let s = x.try_add(y)?;
    let alg = x.algebra();
    let arg = &x.square() + &y.square();
    let root = Element::from_raw(alg, alg.sqrt_psd_coords(arg.coords())?);
    Ok(&s - &root)
}

/// `x + y − √(x² + y² + 2w)`; `w` must lie in the cone.
pub fn weighted_fb_map(x: &Element, y: &Element, w: &Element) -> Result<Element> {
    let s = x.try_add(y)?;
    x.try_sub(w)?;
    check_weight(w)?;
    let alg = x.algebra();
    let mut arg = &x.square() + &y.square();
    arg.axpy(2.0, w);
    let root = Element::from_raw(alg, alg.sqrt_psd_coords(arg.coords())?);
    Ok(&s - &root)
}

/// Rejects weights whose smallest eigenvalue is below `-1e-9·(1+‖w‖)`.
pub fn check_weight(w: &Element) -> Result<()> {
    let lmin = w.min_eigenvalue()?;
    if lmin < -1e-9 * (1.0 + w.norm()) {
        return Err(invalid(format!("weight is outside the cone (smallest eigenvalue {lmin:e})")));
    }
    Ok(())
}

/// The three feasibility gaps of a candidate pair `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualTriple {
    /// `‖x∘y − w‖`
    pub comp: f64,
    /// `‖Ax + By − q‖`
    pub lin: f64,
    /// `max(0, −λmin(x), −λmin(y))`
    pub cone: f64,
}

impl ResidualTriple {
    pub fn max(&self) -> f64 {
        self.comp.max(self.lin).max(self.cone)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.comp <= tol && self.lin <= tol && self.cone <= tol
    }
}

pub fn residuals(x: &Element, y: &Element, problem: &PairProblem) -> Result<ResidualTriple> {
    let alg = problem.algebra();
    if x.algebra() != alg || y.algebra() != alg {
        return Err(invalid("candidate pair does not live in the problem's algebra"));
    }
    residuals_coords(x.coords(), y.coords(), problem)
}

pub(crate) fn residuals_coords(x: &[f64], y: &[f64], problem: &PairProblem) -> Result<ResidualTriple> {
    let alg = problem.algebra();
    let mut xy = alg.product_coords(x, y);
    xy.iter_mut().zip(problem.w().coords()).for_each(|(a, w)| *a -= w);
    let comp = alg.norm_coords(&xy);
    let lin_vec = problem.linear_residual_coords(x, y);
    let lin = alg.norm_coords(&lin_vec);
    let lx = alg.min_eigenvalue_coords(x)?;
    let ly = alg.min_eigenvalue_coords(y)?;
    let cone = 0.0f64.max(-lx).max(-ly);
    Ok(ResidualTriple { comp, lin, cone })
}
