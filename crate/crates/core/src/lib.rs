//! Orthogonal polynomials on a circular arc: closed-form evaluation of the
//! orthonormal family for the arc weight, quadrature in the uniformizing
//! variable, principal-value transforms, Fourier partial sums, and perturbed
//! (variable-weight) bases.

// `!(x >= bound)` is used on purpose throughout: unlike `x < bound`, it
// also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Crate version, for run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod arc;
pub mod error;
pub mod family;
pub mod fourier;
pub mod grid;
pub mod hilbert;
pub mod measure;
pub mod muckenhoupt;
pub mod perturbed;
pub mod poly;
pub mod quadrature;

pub use arc::{ArcParams, Branch, Sheet};
pub use error::{ArcError, Result};
pub use family::{family20, TestFunction};
pub use fourier::{expand, FourierExpansion};
pub use grid::{ArcEval, Domain, GridFunction};
pub use hilbert::{PvMethod, PvScheme};
pub use measure::{lp_norm_weighted, KFamily, MeasureKind, MeasureSpec};
pub use muckenhoupt::{muckenhoupt_check, MkParams, MkReport};
pub use perturbed::{build_perturbed_basis, PerturbedBasis};
pub use poly::{Endpoint, PolySystem};
pub use quadrature::QuadratureRule;

pub use num_complex::Complex64;
