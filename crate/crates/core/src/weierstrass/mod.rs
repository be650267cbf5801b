//! Surfaces from Weierstrass data `(q(u), f(u), r(v), g(v))`.
//!
//! The tangents
//!
//! ```text
//! phi_u = f(u) ( (1 + q^2)/2, -(1 - q^2)/2, -q )
//! phi_v = g(v) ( -(1 + r^2)/2, -(1 - r^2)/2, -r )
//! ```
//!
//! are null, `2 <phi_u, phi_v> = (1 + q r)^2 f g`, and `phi_uv = 0`, so
//! `phi = X(u) + Y(v)` is a timelike minimal surface wherever the metric is nonzero.

mod extract;
mod pseudosphere;
mod spinor;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::grid::{check_size, Chart, Domain, Split, SurfaceGrid, TangentFn};
use crate::quadrature::{cumulative, GaussLegendre, POINTS_PER_CELL};
use crate::spline::CubicSpline;
use crate::{Vec3L, DEGENERACY_THRESHOLD};

pub use extract::{data_from_tangents, extract_data, CurveFn, NullCurvePair};
pub use pseudosphere::pseudosphere_surface;
pub use spinor::{
    dirac_residual, spinors_from_data, surface_from_spinors, Field2, SpinorField,
};

/// A real function of one variable: either an expression with its exact derivative
/// or a natural cubic spline through samples.
#[derive(Debug, Clone)]
pub enum Curve {
    Symbolic { expr: Expr, derivative: Expr },
    Sampled(CubicSpline),
}

impl Curve {
    pub fn symbolic(expr: Expr) -> Self {
        let derivative = expr.differentiate();
        Curve::Symbolic { expr, derivative }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Curve::Symbolic { expr, .. } => Ok(expr.eval(t)?),
            Curve::Sampled(s) => Ok(s.eval(t)),
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        match self {
            Curve::Symbolic { derivative, .. } => Ok(derivative.eval(t)?),
            Curve::Sampled(s) => Ok(s.derivative(t)),
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match self {
            Curve::Symbolic { expr, .. } => Some(expr),
            Curve::Sampled(_) => None,
        }
    }
}

impl From<Expr> for Curve {
    fn from(e: Expr) -> Self {
        Curve::symbolic(e)
    }
}

/// Weierstrass data; `q`, `f` are functions of `u` and `r`, `g` of `v`.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub q: Curve,
    pub f: Curve,
    pub r: Curve,
    pub g: Curve,
}

fn check_var(field: &'static str, expected: &'static str, e: &Expr) -> Result<()> {
    match e.var_name() {
        Some(name) if name != expected => Err(Error::VariableMismatch {
            field,
            expected,
            found: name.to_owned(),
        }),
        _ => Ok(()),
    }
}

impl WeierstrassData {
    /// Checks that `q`, `f` mention only `u` and `r`, `g` only `v`.
    pub fn new(q: Expr, f: Expr, r: Expr, g: Expr) -> Result<Self> {
        check_var("q", "u", &q)?;
        check_var("f", "u", &f)?;
        check_var("r", "v", &r)?;
        check_var("g", "v", &g)?;
        Ok(Self::from_curves(q.into(), f.into(), r.into(), g.into()))
    }

    pub fn parse(q: &str, f: &str, r: &str, g: &str) -> Result<Self> {
        Self::new(parse(q)?, parse(f)?, parse(r)?, parse(g)?)
    }

    pub fn from_curves(q: Curve, f: Curve, r: Curve, g: Curve) -> Self {
        Self { q, f, r, g }
    }

    pub fn tangent_u(&self, u: f64) -> Result<Vec3L> {
        Ok(null_tangent_u(self.q.eval(u)?, self.f.eval(u)?))
    }

    pub fn tangent_v(&self, v: f64) -> Result<Vec3L> {
        Ok(null_tangent_v(self.r.eval(v)?, self.g.eval(v)?))
    }

    /// Signed conformal factor `(1 + q r)^2 f g`.
    pub fn conformal_factor(&self, u: f64, v: f64) -> Result<f64> {
        let s = 1.0 + self.q.eval(u)? * self.r.eval(v)?;
        Ok(s * s * self.f.eval(u)? * self.g.eval(v)?)
    }

    /// Data of the conjugate surface `X(u) - Y(v)`.
    pub fn conjugate(&self) -> Self {
        let g = match &self.g {
            Curve::Symbolic { expr, .. } => Curve::symbolic(Expr::negate(expr)),
            Curve::Sampled(s) => Curve::Sampled(CubicSpline::new(
                s.knots().to_vec(),
                s.values().iter().map(|x| -x).collect(),
            )),
        };
        Self {
            q: self.q.clone(),
            f: self.f.clone(),
            r: self.r.clone(),
            g,
        }
    }
}

/// `f ((1 + q^2)/2, -(1 - q^2)/2, -q)`.
pub fn null_tangent_u(q: f64, f: f64) -> Vec3L {
    Vec3L::new(0.5 * (1.0 + q * q), -0.5 * (1.0 - q * q), -q) * f
}

/// `g (-(1 + r^2)/2, -(1 - r^2)/2, -r)`.
pub fn null_tangent_v(r: f64, g: f64) -> Vec3L {
    Vec3L::new(-0.5 * (1.0 + r * r), -0.5 * (1.0 - r * r), -r) * g
}

/// `(phi_u, phi_v)` at `(u, v)`.
pub fn tangents(d: &WeierstrassData, u: f64, v: f64) -> Result<(Vec3L, Vec3L)> {
    Ok((d.tangent_u(u)?, d.tangent_v(v)?))
}

fn data_tangent_fn(d: &WeierstrassData) -> TangentFn {
    let data = d.clone();
    Arc::new(move |u, v| tangents(&data, u, v))
}

/// Builds `phi(u_i, v_j) = X(u_i) + Y(v_j)` with `X`, `Y` accumulated from the
/// lower-left corner by 4-point Gauss-Legendre per lattice cell, so `phi = 0` there.
///
/// Nodes with `|(1 + q r)^2 f g| < 1e-10` are flagged degenerate.
pub fn integrate_surface(
    d: &WeierstrassData,
    domain: Domain,
    nu: usize,
    nv: usize,
) -> Result<SurfaceGrid> {
    domain.validate()?;
    check_size(nu, nv)?;
    let rule = GaussLegendre::<f64>::new(POINTS_PER_CELL);
    let us = domain.us(nu);
    let vs = domain.vs(nv);
    let (x, y) = rayon::join(
        || cumulative(&rule, &us, |u| d.tangent_u(u)),
        || cumulative(&rule, &vs, |v| d.tangent_v(v)),
    );
    let (x, y) = (x?, y?);

    let mut points = Vec::with_capacity(nu * nv);
    for xi in &x {
        points.extend(y.iter().map(|yj| *xi + *yj));
    }

    // conformal factor factors into u and v parts
    let qs = us.iter().map(|&u| d.q.eval(u)).collect::<Result<Vec<_>>>()?;
    let fs = us.iter().map(|&u| d.f.eval(u)).collect::<Result<Vec<_>>>()?;
    let rs = vs.iter().map(|&v| d.r.eval(v)).collect::<Result<Vec<_>>>()?;
    let gs = vs.iter().map(|&v| d.g.eval(v)).collect::<Result<Vec<_>>>()?;
    let mut degenerate = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let s = 1.0 + qs[i] * rs[j];
            degenerate.push((s * s * fs[i] * gs[j]).abs() < DEGENERACY_THRESHOLD);
        }
    }

    Ok(SurfaceGrid {
        chart: Chart::Null,
        domain,
        nu,
        nv,
        points,
        degenerate,
        split: Some(Split { x, y }),
        tangents: Some(data_tangent_fn(d)),
    })
}

/// The conjugate surface `X(u) - Y(v)`, anchored at the corner like its partner.
pub fn conjugate(s: &SurfaceGrid) -> Result<SurfaceGrid> {
    let split = s.split.as_ref().ok_or(Error::MissingDecomposition)?;
    let x0 = split.x[0];
    let y0 = split.y[0];
    let x: Vec<Vec3L> = split.x.iter().map(|p| *p - x0).collect();
    let y: Vec<Vec3L> = split.y.iter().map(|p| -(*p - y0)).collect();
    let mut points = Vec::with_capacity(s.nu * s.nv);
    for xi in &x {
        points.extend(y.iter().map(|yj| *xi + *yj));
    }
    let tangents = s.tangents.clone().map(|t| -> TangentFn {
        Arc::new(move |u, v| {
            let (a, b) = t(u, v)?;
            Ok((a, -b))
        })
    });
    Ok(SurfaceGrid {
        chart: s.chart,
        domain: s.domain,
        nu: s.nu,
        nv: s.nv,
        points,
        degenerate: s.degenerate.clone(),
        split: Some(Split { x, y }),
        tangents,
    })
}
