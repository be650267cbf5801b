//! Timelike minimal and constant-mean-curvature surfaces in Minkowski 3-space.
//!
//! Surfaces are generated from Weierstrass data `(q(u), f(u), r(v), g(v))` or from
//! spinors, sampled on a rectangular lattice of null coordinates `(u, v)`, and then
//! measured by a finite-difference analyzer (fundamental forms, curvatures, Hopf
//! differential, Gauss map, Lax frames) and by the string-worldsheet functionals.
//!
//! Signature convention: `E^3_1` carries `-x1^2 + x2^2 + x3^2`, so `x1` is timelike.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod fd;
pub mod gallery;
pub mod geometry;
pub mod grid;
pub mod quadrature;
pub mod spline;
pub mod weierstrass;
pub mod worldsheet;

use num_rational::Rational64;

pub use algebra::{ad_action, inner_by_trace, sq_mul, Matrix2, Scalar, Vector3, Vector4};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use fd::FdScheme;
pub use grid::{Chart, Domain, SurfaceGrid};
pub use weierstrass::WeierstrassData;

/// Point or vector of `E^3_1`, also an imaginary split-quaternion.
pub type Vec3L = Vector3<f64>;
/// Point of `E^4_2`.
pub type Vec4 = Vector4<f64>;
/// Real 2x2 matrix.
pub type Mat2R = Matrix2<f64>;
/// Exact rational variants, handy for checking the algebra without rounding.
pub type Vec3Q = Vector3<Rational64>;
pub type Vec4Q = Vector4<Rational64>;
pub type Mat2Q = Matrix2<Rational64>;

/// `|e^omega|` below this marks a node as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;
