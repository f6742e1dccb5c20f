//! Euclidean Jordan algebras in coordinates.
//!
//! Three simple kinds are supported together with finite Cartesian products
//! of them:
//!
//! * `Rn(n)`: ℝⁿ with the componentwise product and the dot product.
//! * `Spin(n)`: the spin (Lorentz) algebra on ℝⁿ, coordinates `(x₀, x̄)`,
//!   product `(⟨x,y⟩, x₀ȳ + y₀x̄)` and trace inner product `2·(x·y)`.
//! * `Sym(n)`: real symmetric n×n matrices with `X∘Y = (XY+YX)/2` and
//!   `⟨X,Y⟩ = trace(XY)`.
//!
//! Sym coordinates use the trace-orthonormal basis: the n diagonal entries
//! first, then `√2·X[i][j]` for `i < j` in row-major order. With that basis the
//! coordinate dot product equals the trace form exactly.

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, symmetric_eigen, Matrix};

/// Eigenvalues in `[-SQRT_CLAMP, 0)` are treated as zero by the square root.
pub const SQRT_CLAMP: f64 = 1e-10;

/// Declares which algebra is in play.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraDescriptor {
    Rn(usize),
    Spin(usize),
    Sym(usize),
    Product(Vec<AlgebraDescriptor>),
}

impl AlgebraDescriptor {
    /// Coordinate dimension.
    pub fn dim(&self) -> usize {
        match self {
            Self::Rn(n) | Self::Spin(n) => *n,
            Self::Sym(n) => n * (n + 1) / 2,
            Self::Product(fs) => fs.iter().map(Self::dim).sum(),
        }
    }

    /// Jordan rank (number of eigenvalues).
    pub fn rank(&self) -> usize {
        match self {
            Self::Rn(n) | Self::Sym(n) => *n,
            Self::Spin(_) => 2,
            Self::Product(fs) => fs.iter().map(Self::rank).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Rn(0) | Self::Sym(0) => Err(invalid("algebra parameter n must be positive")),
            Self::Spin(n) if *n < 2 => Err(invalid(format!("spin algebra needs n >= 2, got {n}"))),
            Self::Product(fs) if fs.len() < 2 => {
                Err(invalid("a product algebra needs at least two factors"))
            }
            Self::Product(fs) => fs.iter().try_for_each(Self::validate),
            _ => Ok(()),
        }
    }

    /// True for the plain ℝⁿ algebra.
    pub fn is_rn(&self) -> bool {
        matches!(self, Self::Rn(_))
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rn(n) => write!(f, "R^{n}"),
            Self::Spin(n) => write!(f, "L^{n}"),
            Self::Sym(n) => write!(f, "Sym({n})"),
            Self::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SimpleKind {
    Rn,
    Spin,
    Sym(usize),
}

/// One simple factor placed at a coordinate offset.
#[derive(Debug, Clone, Copy)]
struct Block {
    kind: SimpleKind,
    offset: usize,
    dim: usize,
}

impl Block {
    fn range(&self) -> core::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }
}

#[derive(Debug)]
struct Inner {
    descriptor: AlgebraDescriptor,
    dim: usize,
    rank: usize,
    blocks: Box<[Block]>,
}

/// Cheaply clonable handle to a validated algebra.
#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.0.descriptor)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

fn flatten(desc: &AlgebraDescriptor, offset: &mut usize, out: &mut Vec<Block>) {
    let kind = match desc {
        AlgebraDescriptor::Rn(_) => SimpleKind::Rn,
        AlgebraDescriptor::Spin(_) => SimpleKind::Spin,
        AlgebraDescriptor::Sym(n) => SimpleKind::Sym(*n),
        AlgebraDescriptor::Product(fs) => {
            for f in fs {
                flatten(f, offset, out);
            }
            return;
        }
    };
    let dim = desc.dim();
    out.push(Block { kind, offset: *offset, dim });
    *offset += dim;
}

/// Raw spectral data: descending eigenvalues and frame coordinates.
#[derive(Debug, Clone)]
pub(crate) struct RawSpectral {
    pub values: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
}

impl Algebra {
    /// Validates the descriptor and fixes the coordinate basis.
    pub fn new(descriptor: AlgebraDescriptor) -> Result<Self> {
        descriptor.validate()?;
        let mut blocks = Vec::new();
        let mut offset = 0;
        flatten(&descriptor, &mut offset, &mut blocks);
        let dim = descriptor.dim();
        let rank = descriptor.rank();
        debug_assert_eq!(offset, dim);
        Ok(Self(Arc::new(Inner { descriptor, dim, rank, blocks: blocks.into_boxed_slice() })))
    }

    pub fn rn(n: usize) -> Result<Self> {
        Self::new(AlgebraDescriptor::Rn(n))
    }

    pub fn spin(n: usize) -> Result<Self> {
        Self::new(AlgebraDescriptor::Spin(n))
    }

    pub fn sym(n: usize) -> Result<Self> {
        Self::new(AlgebraDescriptor::Sym(n))
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.0.descriptor
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn element(&self, coords: Vec<f64>) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(invalid(format!(
                "element of {} needs {} coordinates, got {}",
                self.descriptor(),
                self.dim(),
                coords.len()
            )));
        }
        Ok(Element { algebra: self.clone(), coords })
    }

    pub fn zero(&self) -> Element {
        Element { algebra: self.clone(), coords: vec![0.0; self.dim()] }
    }

    /// The unit element `e`.
    pub fn unit(&self) -> Element {
        Element { algebra: self.clone(), coords: self.unit_coords() }
    }

    /// The `j`-th coordinate basis element.
    pub fn basis(&self, j: usize) -> Element {
        let mut coords = vec![0.0; self.dim()];
        coords[j] = 1.0;
        Element { algebra: self.clone(), coords }
    }

    pub(crate) fn unit_coords(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        for b in self.0.blocks.iter() {
            match b.kind {
                SimpleKind::Rn => e[b.range()].iter_mut().for_each(|v| *v = 1.0),
                SimpleKind::Spin => e[b.offset] = 1.0,
                SimpleKind::Sym(n) => e[b.offset..b.offset + n].iter_mut().for_each(|v| *v = 1.0),
            }
        }
        e
    }

    pub(crate) fn product_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for blk in self.0.blocks.iter() {
            let r = blk.range();
            let (x, y) = (&a[r.clone()], &b[r.clone()]);
            let dst = &mut out[r];
            match blk.kind {
                SimpleKind::Rn => {
                    for ((d, u), v) in dst.iter_mut().zip(x).zip(y) {
                        *d = u * v;
                    }
                }
                SimpleKind::Spin => {
                    dst[0] = dot(x, y);
                    for i in 1..blk.dim {
                        dst[i] = x[0] * y[i] + y[0] * x[i];
                    }
                }
                SimpleKind::Sym(n) => {
                    let xm = unpack_symmetric(n, x);
                    let ym = unpack_symmetric(n, y);
                    let xy = xm.matmul(&ym);
                    let sym = xy.add(&xy.transpose()).scaled(0.5);
                    dst.copy_from_slice(&pack_symmetric(&sym));
                }
            }
        }
        out
    }

    pub(crate) fn inner_coords(&self, a: &[f64], b: &[f64]) -> f64 {
        self.0
            .blocks
            .iter()
            .map(|blk| {
                let r = blk.range();
                let d = dot(&a[r.clone()], &b[r]);
                if blk.kind == SimpleKind::Spin {
                    2.0 * d
                } else {
                    d
                }
            })
            .sum()
    }

    pub(crate) fn norm_coords(&self, a: &[f64]) -> f64 {
        libm::sqrt(self.inner_coords(a, a))
    }

    pub(crate) fn spectral_coords(&self, x: &[f64]) -> Result<RawSpectral> {
        let dim = self.dim();
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(self.rank());
        for blk in self.0.blocks.iter() {
            let xs = &x[blk.range()];
            let embed = |local: &[f64]| {
                let mut full = vec![0.0; dim];
                full[blk.range()].copy_from_slice(local);
                full
            };
            match blk.kind {
                SimpleKind::Rn => {
                    for (i, &v) in xs.iter().enumerate() {
                        let mut f = vec![0.0; dim];
                        f[blk.offset + i] = 1.0;
                        pairs.push((v, f));
                    }
                }
                SimpleKind::Spin => {
                    let bar = &xs[1..];
                    let r = libm::sqrt(dot(bar, bar));
                    let mut u = vec![0.0; bar.len()];
                    if r == 0.0 {
                        u[0] = 1.0;
                    } else {
                        u.iter_mut().zip(bar).for_each(|(d, &b)| *d = b / r);
                    }
                    for sign in [1.0, -1.0] {
                        let mut local = vec![0.5; 1];
                        local.extend(u.iter().map(|&ui| 0.5 * sign * ui));
                        pairs.push((xs[0] + sign * r, embed(&local)));
                    }
                }
                SimpleKind::Sym(n) => {
                    let eig = symmetric_eigen(&unpack_symmetric(n, xs))?;
                    for k in 0..n {
                        let v = eig.vectors.column(k);
                        let outer = Matrix::from_columns(n, n, |j| v.iter().map(|vi| vi * v[j]).collect());
                        pairs.push((eig.values[k], embed(&pack_symmetric(&outer))));
                    }
                }
            }
        }
        // stable sort keeps block order among equal eigenvalues
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal));
        let (values, frame) = pairs.into_iter().unzip();
        Ok(RawSpectral { values, frame })
    }

    pub(crate) fn min_eigenvalue_coords(&self, x: &[f64]) -> Result<f64> {
        let s = self.spectral_coords(x)?;
        Ok(s.values.last().copied().unwrap_or(0.0))
    }

    /// Applies a scalar function to the eigenvalues: `Σ f(λᵢ) fᵢ`.
    pub(crate) fn map_spectrum(&self, x: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let s = self.spectral_coords(x)?;
        let mut out = vec![0.0; self.dim()];
        for (lam, fr) in s.values.iter().zip(&s.frame) {
            let c = f(*lam);
            if c != 0.0 {
                out.iter_mut().zip(fr).for_each(|(o, v)| *o += c * v);
            }
        }
        Ok(out)
    }

    /// Square root of an element that is in the cone up to rounding; every
    /// negative eigenvalue is clamped to zero.
    pub(crate) fn sqrt_psd_coords(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.map_spectrum(x, |l| libm::sqrt(l.max(0.0)))
    }

    /// Matrix of `h ↦ x∘h` in the coordinate basis.
    pub(crate) fn lyapunov_coords(&self, x: &[f64]) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim);
        for blk in self.0.blocks.iter() {
            let o = blk.offset;
            let xs = &x[blk.range()];
            match blk.kind {
                SimpleKind::Rn => {
                    for (i, &v) in xs.iter().enumerate() {
                        m[(o + i, o + i)] = v;
                    }
                }
                SimpleKind::Spin => {
                    for i in 0..blk.dim {
                        m[(o + i, o + i)] = xs[0];
                    }
                    for i in 1..blk.dim {
                        m[(o, o + i)] = xs[i];
                        m[(o + i, o)] = xs[i];
                    }
                }
                SimpleKind::Sym(n) => {
                    let xm = unpack_symmetric(n, xs);
                    let mut h = vec![0.0; blk.dim];
                    for j in 0..blk.dim {
                        h.iter_mut().for_each(|v| *v = 0.0);
                        h[j] = 1.0;
                        let hm = unpack_symmetric(n, &h);
                        let xh = xm.matmul(&hm);
                        let col = pack_symmetric(&xh.add(&xh.transpose()).scaled(0.5));
                        for (i, c) in col.into_iter().enumerate() {
                            m[(o + i, o + j)] = c;
                        }
                    }
                }
            }
        }
        m
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.algebra != *self {
            return Err(invalid(format!(
                "element lives in {}, expected {}",
                x.algebra.descriptor(),
                self.descriptor()
            )));
        }
        Ok(())
    }
}

/// Unpacks Sym(n) coordinates into the symmetric matrix they represent.
pub fn unpack_symmetric(n: usize, coords: &[f64]) -> Matrix {
    debug_assert_eq!(coords.len(), n * (n + 1) / 2);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = coords[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let v = coords[k] / core::f64::consts::SQRT_2;
            m[(i, j)] = v;
            m[(j, i)] = v;
            k += 1;
        }
    }
    m
}

/// Packs a square matrix (its symmetric part) into Sym(n) coordinates.
pub fn pack_symmetric(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut c = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        c.push(m[(i, i)]);
    }
    for i in 0..n {
        for j in i + 1..n {
            c.push(core::f64::consts::FRAC_1_SQRT_2 * (m[(i, j)] + m[(j, i)]));
        }
    }
    c
}

/// A point of the algebra in the fixed coordinate basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<f64>,
}

/// Scalar functions that can be lifted through the spectral decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    Plus,
    Minus,
    Abs,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeClass {
    Interior,
    Boundary,
    Outside,
}

/// Eigenvalues (descending) with a Jordan frame.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    /// `Σ f(λᵢ) fᵢ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Element {
        let alg = self.frame[0].algebra.clone();
        let mut out = alg.zero();
        for (l, fr) in self.eigenvalues.iter().zip(&self.frame) {
            out.axpy(f(*l), fr);
        }
        out
    }

    pub fn reconstruct(&self) -> Element {
        self.apply(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub(crate) fn from_raw(algebra: &Algebra, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Self { algebra: algebra.clone(), coords }
    }

    fn same(&self, other: &Element) -> Result<()> {
        self.algebra.check(other)
    }

    /// `x∘y`.
    pub fn jordan_product(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(Self::from_raw(&self.algebra, self.algebra.product_coords(&self.coords, &other.coords)))
    }

    /// `x∘x`.
    pub fn square(&self) -> Element {
        Self::from_raw(&self.algebra, self.algebra.product_coords(&self.coords, &self.coords))
    }

    /// Trace inner product `⟨x,y⟩`.
    pub fn inner_product(&self, other: &Element) -> Result<f64> {
        self.same(other)?;
        Ok(self.algebra.inner_coords(&self.coords, &other.coords))
    }

    /// Norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.algebra.norm_coords(&self.coords)
    }

    pub fn spectral_decompose(&self) -> Result<SpectralDecomposition> {
        let raw = self.algebra.spectral_coords(&self.coords)?;
        Ok(SpectralDecomposition {
            eigenvalues: raw.values,
            frame: raw.frame.into_iter().map(|f| Self::from_raw(&self.algebra, f)).collect(),
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.algebra.spectral_coords(&self.coords)?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.algebra.min_eigenvalue_coords(&self.coords)
    }

    /// Lifts `f` through the spectral decomposition.
    ///
    /// `Minus` returns `x⁻ = x⁺ − x`, so that `x = x⁺ − x⁻`. `Sqrt` treats
    /// eigenvalues in `[-1e-10, 0)` as zero and rejects anything below.
    pub fn spectral_map(&self, f: SpectralFn) -> Result<Element> {
        let coords = match f {
            SpectralFn::Plus => self.algebra.map_spectrum(&self.coords, |l| l.max(0.0))?,
            SpectralFn::Minus => self.algebra.map_spectrum(&self.coords, |l| (-l).max(0.0))?,
            SpectralFn::Abs => self.algebra.map_spectrum(&self.coords, f64::abs)?,
            SpectralFn::Sqrt => {
                let s = self.spectral_decompose()?;
                let lmin = s.min_eigenvalue();
                if lmin < -SQRT_CLAMP {
                    return Err(Error::Domain(format!(
                        "square root of an element with eigenvalue {lmin:e}"
                    )));
                }
                return Ok(s.apply(|l| libm::sqrt(l.max(0.0))));
            }
        };
        Ok(Self::from_raw(&self.algebra, coords))
    }

    pub fn plus(&self) -> Result<Element> {
        self.spectral_map(SpectralFn::Plus)
    }

    pub fn minus(&self) -> Result<Element> {
        self.spectral_map(SpectralFn::Minus)
    }

    pub fn abs(&self) -> Result<Element> {
        self.spectral_map(SpectralFn::Abs)
    }

    pub fn sqrt(&self) -> Result<Element> {
        self.spectral_map(SpectralFn::Sqrt)
    }

    /// Classifies `x` against the symmetric cone using its smallest eigenvalue.
    pub fn cone_membership(&self, tol: f64) -> Result<ConeClass> {
        if !(tol > 0.0) {
            return Err(invalid("cone membership tolerance must be positive"));
        }
        let lmin = self.min_eigenvalue()?;
        Ok(if lmin > tol {
            ConeClass::Interior
        } else if lmin < -tol {
            ConeClass::Outside
        } else {
            ConeClass::Boundary
        })
    }

    /// Matrix of the multiplication operator `L_x: h ↦ x∘h`; always symmetric.
    pub fn lyapunov_operator(&self) -> Matrix {
        self.algebra.lyapunov_coords(&self.coords)
    }

    /// Whether `L_x` and `L_y` commute, with the tolerance scaled by both operator norms.
    pub fn operator_commute(&self, other: &Element, tol: f64) -> Result<bool> {
        self.same(other)?;
        let lx = self.lyapunov_operator();
        let ly = other.lyapunov_operator();
        let comm = lx.matmul(&ly).sub(&ly.matmul(&lx)).frobenius_norm();
        Ok(comm <= tol * (1.0 + lx.frobenius_norm()) * (1.0 + ly.frobenius_norm()))
    }

    /// `self += a * x`. Panics on an algebra mismatch.
    pub fn axpy(&mut self, a: f64, x: &Element) {
        assert_eq!(self.algebra, x.algebra, "algebra mismatch");
        self.coords.iter_mut().zip(&x.coords).for_each(|(s, v)| *s += a * v);
    }

    pub fn scale(&self, s: f64) -> Element {
        Self::from_raw(&self.algebra, self.coords.iter().map(|v| v * s).collect())
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(self - other)
    }
}

// Operator impls panic on an algebra mismatch; use `try_add`/`try_sub` for a checked version.
impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
        Element::from_raw(&self.algebra, self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
        Element::from_raw(&self.algebra, self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}
