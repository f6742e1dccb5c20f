//! Weighted horizontal linear complementarity problems over Euclidean Jordan
//! algebras.
//!
//! Given linear operators `A`, `B` on an algebra `V`, a weight `w` in the
//! symmetric cone and `q ∈ V`, the weighted problem asks for `x, y ⪰ 0` with
//!
//! ```text
//! x ∘ y = w,    Ax + By = q.
//! ```
//!
//! The crate provides
//!
//! - [`algebra`]: ℝⁿ, spin and symmetric-matrix algebras (and products) with
//!   Jordan products, spectral decompositions and spectral functions;
//! - [`maps`]: the min map and (weighted) Fischer–Burmeister maps;
//! - [`operator`]: dense linear operators, Lyapunov/Stein constructors and the
//!   [`PairProblem`] data;
//! - [`solver`]: a smoothing Newton method and weight-path tracing;
//! - [`pairs`]: exact R₀ / degree / P-pair classification on ℝⁿ.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(clippy::all)]
// NaN must fail every positivity guard, so `!(x > 0.0)` is intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod operator;
pub mod pairs;
pub mod sampling;
pub mod solver;

pub use algebra::{Algebra, AlgebraDescriptor, ConeClass, Element, SpectralDecomposition, SpectralFn};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use maps::{fb_map, min_map, residuals, weighted_fb_map, ResidualTriple};
pub use operator::{lcp_embedding, lyapunov_transform, stein_transform, LcpConvention, LinearOperator, PairProblem};
pub use solver::{assemble_jacobian, path_trace, solve, PathReport, SolveReport, SolveStatus, SolverConfig};
