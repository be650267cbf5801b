//! Spinor form of the representation.
//!
//! With spinors `(s1, t1, s2, t2)` the tangents are
//!
//! ```text
//! phi_u = ( (s1^2 + t1^2)/2, (s1^2 - t1^2)/2, -s1 t1 )
//! phi_v = ( -(s2^2 + t2^2)/2, (s2^2 - t2^2)/2, -s2 t2 )
//! ```
//!
//! and the metric is `(s1 s2 + t1 t2)^2 du dv`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd::try_richardson;
use crate::grid::{check_size, Chart, Domain, SurfaceGrid, TangentFn};
use crate::quadrature::{cumulative, GaussLegendre, POINTS_PER_CELL};
use crate::{Vec3L, DEGENERACY_THRESHOLD};

use super::WeierstrassData;

/// Scalar field on the `(u, v)` plane.
pub type Field2 = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// Spinors `(s1, t1)`, `(s2, t2)` and the Dirac potential `p`.
#[derive(Clone)]
pub struct SpinorField {
    pub s1: Field2,
    pub t1: Field2,
    pub s2: Field2,
    pub t2: Field2,
    pub p: Field2,
}

fn constant(c: f64) -> Field2 {
    Arc::new(move |_, _| Ok(c))
}

impl SpinorField {
    pub fn new(s1: Field2, t1: Field2, s2: Field2, t2: Field2, p: Field2) -> Self {
        Self { s1, t1, s2, t2, p }
    }

    pub fn constant(s1: f64, t1: f64, s2: f64, t2: f64, p: f64) -> Self {
        Self::new(constant(s1), constant(t1), constant(s2), constant(t2), constant(p))
    }

    /// `(s1, t1, s2, t2)` at a point.
    pub fn values(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        Ok([
            (self.s1)(u, v)?,
            (self.t1)(u, v)?,
            (self.s2)(u, v)?,
            (self.t2)(u, v)?,
        ])
    }

    /// `det Phi = s1 s2 + t1 t2`, which equals `e^(omega/2)` on the surface.
    pub fn frame_det(&self, u: f64, v: f64) -> Result<f64> {
        let [s1, t1, s2, t2] = self.values(u, v)?;
        Ok(s1 * s2 + t1 * t2)
    }

    pub fn tangents(&self, u: f64, v: f64) -> Result<(Vec3L, Vec3L)> {
        let [s1, t1, s2, t2] = self.values(u, v)?;
        Ok(spinor_tangents(s1, t1, s2, t2))
    }
}

pub(crate) fn spinor_tangents(s1: f64, t1: f64, s2: f64, t2: f64) -> (Vec3L, Vec3L) {
    (
        Vec3L::new(0.5 * (s1 * s1 + t1 * t1), 0.5 * (s1 * s1 - t1 * t1), -s1 * t1),
        Vec3L::new(-0.5 * (s2 * s2 + t2 * t2), 0.5 * (s2 * s2 - t2 * t2), -s2 * t2),
    )
}

/// Samples used to check the sign of `f` and `g` before taking square roots.
const SIGN_SAMPLES: usize = 257;

/// `(s1, t1, s2, t2) = (q sqrt f, sqrt f, r sqrt g, sqrt g)` with `p = 0`.
///
/// Refused with [`Error::SignObstruction`] when `f` or `g` is not positive somewhere
/// on the domain.
pub fn spinors_from_data(d: &WeierstrassData, domain: Domain) -> Result<SpinorField> {
    domain.validate()?;
    for u in domain.us(SIGN_SAMPLES) {
        if d.f.eval(u)? <= 0.0 {
            return Err(Error::SignObstruction { what: "f", at: u });
        }
    }
    for v in domain.vs(SIGN_SAMPLES) {
        if d.g.eval(v)? <= 0.0 {
            return Err(Error::SignObstruction { what: "g", at: v });
        }
    }
    let root = |x: f64, what: &'static str, at: f64| {
        if x <= 0.0 {
            Err(Error::SignObstruction { what, at })
        } else {
            Ok(x.sqrt())
        }
    };
    let (a, b, c, e) = (d.clone(), d.clone(), d.clone(), d.clone());
    Ok(SpinorField::new(
        Arc::new(move |u, _| Ok(a.q.eval(u)? * root(a.f.eval(u)?, "f", u)?)),
        Arc::new(move |u, _| root(b.f.eval(u)?, "f", u)),
        Arc::new(move |_, v| Ok(c.r.eval(v)? * root(c.g.eval(v)?, "g", v)?)),
        Arc::new(move |_, v| root(e.g.eval(v)?, "g", v)),
        constant(0.0),
    ))
}

/// Path integral of the spinor tangents: along the bottom edge in `u`, then up each
/// column in `v`. The corner maps to the origin.
pub fn surface_from_spinors(
    sp: &SpinorField,
    domain: Domain,
    nu: usize,
    nv: usize,
) -> Result<SurfaceGrid> {
    domain.validate()?;
    check_size(nu, nv)?;
    let rule = GaussLegendre::<f64>::new(POINTS_PER_CELL);
    let us = domain.us(nu);
    let vs = domain.vs(nv);
    let v0 = domain.v0;
    let bottom = cumulative(&rule, &us, |u| Ok::<_, Error>(sp.tangents(u, v0)?.0))?;
    let columns: Vec<Vec<Vec3L>> = us
        .par_iter()
        .map(|&u| cumulative(&rule, &vs, |v| Ok::<_, Error>(sp.tangents(u, v)?.1)))
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(nu * nv);
    let mut degenerate = Vec::with_capacity(nu * nv);
    for (i, &u) in us.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            let det = sp.frame_det(u, v)?;
            if det <= 0.0 {
                return Err(Error::NonPositiveFrameDet { u, v, det });
            }
            points.push(bottom[i] + columns[i][j]);
            degenerate.push(det * det < DEGENERACY_THRESHOLD);
        }
    }
    let field = sp.clone();
    let tangents: TangentFn = Arc::new(move |u, v| field.tangents(u, v));
    Ok(SurfaceGrid {
        chart: Chart::Null,
        domain,
        nu,
        nv,
        points,
        degenerate,
        split: None,
        tangents: Some(tangents),
    })
}

/// Step for the Richardson derivatives of the spinor fields.
const DIRAC_STEP: f64 = 1e-3;

/// Largest violation of the Dirac system
///
/// ```text
/// d_u(-t2) = p s1,   -d_v s1 = p t2,   d_u s2 = p t1,   -d_v t1 = p s2
/// ```
///
/// over an `n x n` lattice of the domain.
pub fn dirac_residual(sp: &SpinorField, domain: Domain, n: usize) -> Result<f64> {
    domain.validate()?;
    check_size(n, n)?;
    let us = domain.us(n);
    let vs = domain.vs(n);
    let rows: Vec<f64> = us
        .par_iter()
        .map(|&u| {
            let mut worst = 0.0f64;
            for &v in &vs {
                let [s1, t1, s2, t2] = sp.values(u, v)?;
                let p = (sp.p)(u, v)?;
                let d_u = |f: &Field2| try_richardson(|x| f(x, v), u, DIRAC_STEP);
                let d_v = |f: &Field2| try_richardson(|y| f(u, y), v, DIRAC_STEP);
                let residuals = [
                    -d_u(&sp.t2)? - p * s1,
                    -d_v(&sp.s1)? - p * t2,
                    d_u(&sp.s2)? - p * t1,
                    -d_v(&sp.t1)? - p * s2,
                ];
                worst = residuals.iter().fold(worst, |m, r| m.max(r.abs()));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}
