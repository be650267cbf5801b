//! Semi-Euclidean linear algebra.
//!
//! `E^4_2` (signature `(-,-,+,+)`) is modelled by real 2x2 matrices through
//!
//! ```text
//! (x0, x1, x2, x3)  <->  | x0 + x3   x1 + x2 |
//!                        | x2 - x1   x0 - x3 |
//! ```
//!
//! so that `<u, u> = -det u`. The basis `1, i, j', k'` spans the split-quaternions and
//! the imaginary part `x1 i + x2 j' + x3 k'` is Minkowski 3-space `E^3_1` with
//! signature `(-,+,+)`.
//!
//! All types are generic over a [`Scalar`]; the crate root exports `f64` aliases and
//! exact rational aliases used to check the algebra without rounding.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{Float, FromPrimitive, Num, Signed};

use crate::error::Error;

/// Ring/field element the algebra can run on: `f32`, `f64` or exact rationals.
///
/// Division is only meaningful for field types; integer scalars truncate.
pub trait Scalar: Copy + PartialOrd + Debug + Num + Signed + FromPrimitive + 'static {
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }
}

impl<T> Scalar for T where T: Copy + PartialOrd + Debug + Num + Signed + FromPrimitive + 'static {}

/// Point or vector of `E^4_2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector4<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

/// Point or vector of `E^3_1`; `x1` is the timelike coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

/// Real 2x2 matrix, row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Vector4<T> {
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub fn to_matrix(self) -> Matrix2<T> {
        Matrix2::new(
            self.x0 + self.x3,
            self.x1 + self.x2,
            self.x2 - self.x1,
            self.x0 - self.x3,
        )
    }

    pub fn from_matrix(m: Matrix2<T>) -> Self {
        let h = T::half();
        Self {
            x0: (m.a + m.d) * h,
            x1: (m.b - m.c) * h,
            x2: (m.b + m.c) * h,
            x3: (m.a - m.d) * h,
        }
    }

    /// Coordinate form of the `(-,-,+,+)` inner product.
    pub fn inner(self, other: Self) -> T {
        -self.x0 * other.x0 - self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Imaginary part, as a vector of `E^3_1`.
    pub fn imaginary(self) -> Vector3<T> {
        Vector3::new(self.x1, self.x2, self.x3)
    }
}

/// Trace form of the inner product, `(tr(uv) - tr(u) tr(v)) / 2`.
pub fn inner_by_trace<T: Scalar>(u: Matrix2<T>, v: Matrix2<T>) -> T {
    ((u * v).trace() - u.trace() * v.trace()) * T::half()
}

impl<T: Scalar> Vector3<T> {
    pub fn new(x1: T, x2: T, x3: T) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Minkowski inner product `-a1 b1 + a2 b2 + a3 b3`.
    pub fn inner(self, other: Self) -> T {
        -self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Lorentz cross product, `diag(-1, 1, 1)` applied to the Euclidean cross product.
    ///
    /// The result is Minkowski-orthogonal to both factors.
    pub fn cross(self, other: Self) -> Self {
        Self::new(
            -(self.x2 * other.x3 - self.x3 * other.x2),
            self.x3 * other.x1 - self.x1 * other.x3,
            self.x1 * other.x2 - self.x2 * other.x1,
        )
    }

    pub fn to_matrix(self) -> Matrix2<T> {
        self.embed().to_matrix()
    }

    pub fn embed(self) -> Vector4<T> {
        Vector4::new(T::zero(), self.x1, self.x2, self.x3)
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn max_abs(self) -> T {
        let a = self.x1.abs();
        let b = self.x2.abs();
        let c = self.x3.abs();
        let ab = if a > b { a } else { b };
        if ab > c {
            ab
        } else {
            c
        }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl<T: Float + Scalar> Vector3<T> {
    /// `sqrt(|<v, v>|)`.
    pub fn minkowski_norm(self) -> T {
        Float::sqrt(Float::abs(self.inner(self)))
    }
}

impl<T: Scalar> Add for Vector3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<T: Scalar> AddAssign for Vector3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vector3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<T: Scalar> Neg for Vector3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl<T: Scalar> Mul<T> for Vector3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl Mul<Vector3<f64>> for f64 {
    type Output = Vector3<f64>;
    fn mul(self, v: Vector3<f64>) -> Vector3<f64> {
        v.scale(self)
    }
}

impl<T: Scalar> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Split-quaternion unit `i`.
    pub fn unit_i() -> Self {
        Self::new(T::zero(), T::one(), -T::one(), T::zero())
    }

    /// Split-quaternion unit `j'`.
    pub fn unit_j() -> Self {
        Self::new(T::zero(), T::one(), T::one(), T::zero())
    }

    /// Split-quaternion unit `k'`.
    pub fn unit_k() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), -T::one())
    }

    pub fn det(self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> T {
        self.a + self.d
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn transpose(self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    /// Adjugate; equals the inverse when `det = 1`.
    pub fn adjugate(self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(self) -> Result<Self, Error> {
        let det = self.det();
        if det.abs() < T::lit(SINGULAR_TOL) {
            return Err(Error::SingularMatrix);
        }
        Ok(self.adjugate().scale(T::one() / det))
    }

    pub fn max_abs(self) -> T {
        [self.a, self.b, self.c, self.d]
            .into_iter()
            .map(|x| x.abs())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}

impl<T: Float + Scalar> Matrix2<T> {
    /// Brings a nearly unimodular matrix back onto `SL(2, R)`.
    ///
    /// Matrices with `|det - 1| <= 1e-12` are returned unchanged, up to `1e-6` they
    /// are rescaled by `1/sqrt(det)`, beyond that [`Error::NotUnimodular`].
    pub fn normalize_sl2(self) -> Result<Self, Error> {
        let det = self.det();
        let dev = Float::abs(det - T::one());
        if dev <= T::lit(1e-12) {
            Ok(self)
        } else if dev <= T::lit(1e-6) {
            Ok(self.scale(T::one() / Float::sqrt(det)))
        } else {
            Err(Error::NotUnimodular {
                det: det.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

impl<T: Scalar> Add for Matrix2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl<T: Scalar> Sub for Matrix2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl<T: Scalar> Neg for Matrix2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Matrix product; on split-quaternions this is the algebra product.
impl<T: Scalar> Mul for Matrix2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Split-quaternion product.
pub fn sq_mul<T: Scalar>(a: Matrix2<T>, b: Matrix2<T>) -> Matrix2<T> {
    a * b
}

const SINGULAR_TOL: f64 = 1e-12;

/// `Ad(g) x = g x g^-1`, read back as a vector of `E^3_1`.
///
/// Conjugation does not see the scale of `g`, so any non-singular `g` is accepted.
pub fn ad_action<T: Scalar>(g: Matrix2<T>, x: Vector3<T>) -> Result<Vector3<T>, Error> {
    let g_inv = g.inverse()?;
    Ok(Vector4::from_matrix(g * x.to_matrix() * g_inv).imaginary())
}
