//! Gauss map, stereographic projection and the equations of the projected map.

use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassData;
use crate::Vec3L;

use super::Analyzer;

/// Stereographic projection of `S^2_1` from the north pole `(0, 0, 1)` in null
/// coordinates: `((x1 + x2)/(1 - x3), (-x1 + x2)/(1 - x3))`.
pub fn project_gauss_map(n: Vec3L) -> Result<(f64, f64)> {
    let residual = n.inner(n) - 1.0;
    if residual.abs() > 1e-6 {
        return Err(Error::NotOnSphere { residual });
    }
    let den = 1.0 - n.x3;
    if den.abs() < 1e-10 {
        return Err(Error::NorthPole);
    }
    Ok(((n.x1 + n.x2) / den, (-n.x1 + n.x2) / den))
}

/// `((q - r), (q + r), (-1 + q r)) / (1 + q r)`.
pub fn inverse_stereographic(q: f64, r: f64) -> Result<Vec3L> {
    let s = 1.0 + q * r;
    if s.abs() < 1e-10 {
        return Err(Error::EquatorSingularity);
    }
    Ok(Vec3L::new(q - r, q + r, -1.0 + q * r) * (1.0 / s))
}

/// Partial derivatives of [`inverse_stereographic`] with respect to `q` and `r`.
pub fn stereographic_partials(q: f64, r: f64) -> Result<(Vec3L, Vec3L)> {
    let s = 1.0 + q * r;
    if s.abs() < 1e-10 {
        return Err(Error::EquatorSingularity);
    }
    let w = 1.0 / (s * s);
    Ok((
        Vec3L::new(1.0 + r * r, 1.0 - r * r, 2.0 * r) * w,
        Vec3L::new(-(1.0 + q * q), 1.0 - q * q, 2.0 * q) * w,
    ))
}

/// Residuals of the projected Gauss map equations at node `(i, j)`:
///
/// ```text
/// q_u = Q / f,   q_v = H (1 + q r)^2 g / 2,   r_u = H (1 + q r)^2 f / 2,   r_v = R / g
/// ```
///
/// `q_u`, `r_v` come from the data (`q_v = r_u = 0` by construction); `Q`, `R` are
/// measured on the analyzed grid.
pub fn gmap_pde_residual(
    d: &WeierstrassData,
    h: f64,
    an: &Analyzer<'_>,
    i: usize,
    j: usize,
) -> Result<[f64; 4]> {
    let (u, v) = an.grid().null_coords(i, j);
    let hopf = an.hopf_differential(i, j)?;
    let (q, f) = (d.q.eval(u)?, d.f.eval(u)?);
    let (r, g) = (d.r.eval(v)?, d.g.eval(v)?);
    if f.abs() < 1e-12 {
        return Err(Error::ZeroDenominator { at: u });
    }
    if g.abs() < 1e-12 {
        return Err(Error::ZeroDenominator { at: v });
    }
    let s2 = (1.0 + q * r).powi(2);
    Ok([
        d.q.derivative(u)? - hopf.q / f,
        0.0 - 0.5 * h * s2 * g,
        0.0 - 0.5 * h * s2 * f,
        d.r.derivative(v)? - hopf.r / g,
    ])
}

/// Non-degenerate nodes where `max(|Q|, |R|) < threshold`.
pub fn umbilic_points(an: &Analyzer<'_>, threshold: f64) -> Vec<(usize, usize)> {
    an.regular_nodes()
        .into_iter()
        .filter(|&(i, j)| {
            let f = an.fields(i, j).expect("regular node");
            f.hopf.q.abs().max(f.hopf.r.abs()) < threshold
        })
        .collect()
}
