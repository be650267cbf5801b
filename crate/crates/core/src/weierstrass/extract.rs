use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::spline::CubicSpline;
use crate::Vec3L;

use super::{Curve, WeierstrassData};

pub type CurveFn = Arc<dyn Fn(f64) -> Result<Vec3L> + Send + Sync>;

/// Tangents `xi(u) = X'(u)` and `eta(v) = Y'(v)` of the two null curves.
#[derive(Clone)]
pub struct NullCurvePair {
    pub xi: CurveFn,
    pub eta: CurveFn,
}

impl NullCurvePair {
    pub fn new(xi: CurveFn, eta: CurveFn) -> Self {
        Self { xi, eta }
    }

    pub fn from_data(d: &WeierstrassData) -> Self {
        let a = d.clone();
        let b = d.clone();
        Self {
            xi: Arc::new(move |u| a.tangent_u(u)),
            eta: Arc::new(move |v| b.tangent_v(v)),
        }
    }
}

fn check_null(x: Vec3L, at: f64) -> Result<()> {
    let residual = x.inner(x);
    let size = x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3;
    if residual.abs() > 1e-9 * size.max(1.0) {
        return Err(Error::NotNull { at, residual });
    }
    Ok(())
}

/// Pointwise inverse of the tangent formulas: `(q, f, r, g)` from null `xi`, `eta`.
///
/// `f = xi1 - xi2`, `q = -xi3 / f`, `g = -(eta1 + eta2)`, `r = -eta3 / g`.
pub fn data_from_tangents(xi: Vec3L, eta: Vec3L, u: f64, v: f64) -> Result<(f64, f64, f64, f64)> {
    check_null(xi, u)?;
    check_null(eta, v)?;
    let f = xi.x1 - xi.x2;
    if f.abs() < 1e-12 {
        return Err(Error::ZeroDenominator { at: u });
    }
    let g = -(eta.x1 + eta.x2);
    if g.abs() < 1e-12 {
        return Err(Error::ZeroDenominator { at: v });
    }
    Ok((-xi.x3 / f, f, -eta.x3 / g, g))
}

/// Samples the pair at `samples` equally spaced points per axis and returns spline
/// data interpolating the recovered `(q, f, r, g)`.
pub fn extract_data(n: &NullCurvePair, domain: Domain, samples: usize) -> Result<WeierstrassData> {
    domain.validate()?;
    if samples < 2 {
        return Err(Error::InvalidGrid("extraction needs at least two samples".into()));
    }
    let us = domain.us(samples);
    let vs = domain.vs(samples);
    let (mut qs, mut fs, mut rs, mut gs) = (vec![], vec![], vec![], vec![]);
    for (&u, &v) in us.iter().zip(&vs) {
        let (q, f, r, g) = data_from_tangents((n.xi)(u)?, (n.eta)(v)?, u, v)?;
        qs.push(q);
        fs.push(f);
        rs.push(r);
        gs.push(g);
    }
    let spline = |ts: &[f64], ys: Vec<f64>| Curve::Sampled(CubicSpline::new(ts.to_vec(), ys));
    Ok(WeierstrassData::from_curves(
        spline(&us, qs),
        spline(&us, fs),
        spline(&vs, rs),
        spline(&vs, gs),
    ))
}
