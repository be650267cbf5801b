use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{inverse_stereographic, stereographic_partials};
use crate::grid::{Chart, Domain, SurfaceGrid, TangentFn};
use crate::Vec3L;

/// Which null coordinate an expression reads.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    U,
    V,
    Constant,
}

#[derive(Clone)]
struct Bound {
    expr: Expr,
    derivative: Expr,
    slot: Slot,
}

impl Bound {
    fn new(field: &'static str, e: &Expr) -> Result<Self> {
        let slot = match e.var_name() {
            None => Slot::Constant,
            Some("u") => Slot::U,
            Some("v") => Slot::V,
            Some(other) => {
                return Err(Error::VariableMismatch {
                    field,
                    expected: "u or v",
                    found: other.to_owned(),
                })
            }
        };
        Ok(Self {
            expr: e.clone(),
            derivative: e.differentiate(),
            slot,
        })
    }

    fn arg(&self, u: f64, v: f64) -> f64 {
        match self.slot {
            Slot::V => v,
            _ => u,
        }
    }

    fn eval(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.expr.eval(self.arg(u, v))?)
    }

    /// `(d/du, d/dv)` of the bound expression.
    fn gradient(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        Ok(match self.slot {
            Slot::Constant => (0.0, 0.0),
            Slot::U => (self.derivative.eval(u)?, 0.0),
            Slot::V => (0.0, self.derivative.eval(v)?),
        })
    }
}

/// Part of the pseudosphere of radius `1/H` about `center`:
/// `phi = center - P(q, r) / H` with `P` the inverse stereographic projection.
///
/// `q` and `r` may each read `u` or `v`.
pub fn pseudosphere_surface(
    h: f64,
    center: Vec3L,
    q: &Expr,
    r: &Expr,
    domain: Domain,
    nu: usize,
    nv: usize,
) -> Result<SurfaceGrid> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidGrid("pseudosphere needs a finite nonzero H".into()));
    }
    let q = Bound::new("q", q)?;
    let r = Bound::new("r", r)?;
    let (qa, ra) = (q.clone(), r.clone());
    let mut grid = SurfaceGrid::from_fn(Chart::Null, domain, nu, nv, move |u, v| {
        let p = inverse_stereographic(qa.eval(u, v)?, ra.eval(u, v)?)?;
        Ok(center - p * (1.0 / h))
    })?;
    let tangents: TangentFn = Arc::new(move |u, v| {
        let (qv, rv) = (q.eval(u, v)?, r.eval(u, v)?);
        let (pq, pr) = stereographic_partials(qv, rv)?;
        let (q_u, q_v) = q.gradient(u, v)?;
        let (r_u, r_v) = r.gradient(u, v)?;
        let s = -1.0 / h;
        Ok(((pq * q_u + pr * r_u) * s, (pq * q_v + pr * r_v) * s))
    });
    grid.tangents = Some(tangents);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn lies_on_the_pseudosphere() {
        let (q, r) = (parse("u").unwrap(), parse("v").unwrap());
        let g = pseudosphere_surface(1.0, Vec3L::zero(), &q, &r, Domain::square(0.5), 9, 9).unwrap();
        assert_eq!(g.point(4, 4), Vec3L::new(0.0, 0.0, 1.0));
        for p in &g.points {
            assert!((p.inner(*p) - 1.0).abs() < 1e-12);
        }
        let c = Vec3L::new(1.0, -2.0, 0.5);
        let g = pseudosphere_surface(2.0, c, &q, &r, Domain::square(0.5), 5, 5).unwrap();
        for p in &g.points {
            let d = *p - c;
            assert!((d.inner(d) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn equator_is_rejected() {
        let (q, r) = (parse("u").unwrap(), parse("v").unwrap());
        // 1 + u v = 0 at (1, -1)
        let e = pseudosphere_surface(
            1.0,
            Vec3L::zero(),
            &q,
            &r,
            Domain::new(0.0, 1.0, -1.0, 0.0).unwrap(),
            3,
            3,
        )
        .unwrap_err();
        assert_eq!(e, Error::EquatorSingularity);
    }

    #[test]
    fn exact_tangents_match_differences() {
        let (q, r) = (parse("v").unwrap(), parse("u^2").unwrap());
        let g = pseudosphere_surface(1.5, Vec3L::zero(), &q, &r, Domain::square(0.4), 3, 3).unwrap();
        let t = g.tangents.clone().unwrap();
        let phi = |u: f64, v: f64| {
            let p = inverse_stereographic(v, u * u).unwrap();
            p * (-1.0 / 1.5)
        };
        let (u, v, e) = (0.1, -0.2, 1e-5);
        let (pu, pv) = t(u, v).unwrap();
        let fu = (phi(u + e, v) - phi(u - e, v)) * (0.5 / e);
        let fv = (phi(u, v + e) - phi(u, v - e)) * (0.5 / e);
        assert!((pu - fu).max_abs() < 1e-9);
        assert!((pv - fv).max_abs() < 1e-9);
    }
}
