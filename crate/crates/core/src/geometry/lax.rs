//! SL(2,R) frames solving `Phi_u = Phi U`, `Phi_v = Phi V`.
//!
//! ```text
//! U = |  omega_u / 4         (H/2) e^(omega/2) |    V = | -omega_v / 4        R e^(-omega/2) |
//!     | -Q e^(-omega/2)     -omega_u / 4       |        | -(H/2) e^(omega/2)  omega_v / 4    |
//! ```
//!
//! The tangents are recovered as `phi_u = e^(omega/2) Phi E12 Phi^-1` and
//! `phi_v = e^(omega/2) Phi E21 Phi^-1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{check_size, Domain};
use crate::weierstrass::WeierstrassData;
use crate::{Mat2R, Vec3L, Vec4};

/// `omega`, its first derivatives, `H`, `Q` and `R` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxSample {
    pub omega: f64,
    pub omega_u: f64,
    pub omega_v: f64,
    pub h: f64,
    pub q: f64,
    pub r: f64,
}

/// Source of the fields entering the Lax matrices.
pub trait LaxFields: Sync {
    fn sample(&self, u: f64, v: f64) -> Result<LaxSample>;
}

/// Minimal data: `H = 0`, `Q = q' f`, `R = r' g`, `e^omega = (1 + q r)^2 f g`.
impl LaxFields for WeierstrassData {
    fn sample(&self, u: f64, v: f64) -> Result<LaxSample> {
        let (q, dq, f, df) = (
            self.q.eval(u)?,
            self.q.derivative(u)?,
            self.f.eval(u)?,
            self.f.derivative(u)?,
        );
        let (r, dr, g, dg) = (
            self.r.eval(v)?,
            self.r.derivative(v)?,
            self.g.eval(v)?,
            self.g.derivative(v)?,
        );
        let s = 1.0 + q * r;
        let lambda = s * s * f * g;
        if !(lambda > 0.0) {
            return Err(Error::FrameObstruction("conformal factor must be positive"));
        }
        Ok(LaxSample {
            omega: lambda.ln(),
            omega_u: 2.0 * dq * r / s + df / f,
            omega_v: 2.0 * q * dr / s + dg / g,
            h: 0.0,
            q: dq * f,
            r: dr * g,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxCoefficients {
    pub u: Mat2R,
    pub v: Mat2R,
}

pub fn lax_coefficients(s: &LaxSample) -> LaxCoefficients {
    let up = (0.5 * s.omega).exp();
    let down = (-0.5 * s.omega).exp();
    LaxCoefficients {
        u: Mat2R::new(
            0.25 * s.omega_u,
            0.5 * s.h * up,
            -s.q * down,
            -0.25 * s.omega_u,
        ),
        v: Mat2R::new(
            -0.25 * s.omega_v,
            s.r * down,
            -0.5 * s.h * up,
            0.25 * s.omega_v,
        ),
    }
}

/// The frame `Phi` in SL(2,R) with `e^(omega/2) Phi E12 Phi^-1 = phi_u` and
/// `e^(omega/2) Phi E21 Phi^-1 = phi_v`.
///
/// Exists when `phi_u` and `phi_v` are future-pointing null vectors with
/// `<phi_u, phi_v> > 0`.
pub fn coordinate_frame(pu: Vec3L, pv: Vec3L) -> Result<Mat2R> {
    let lambda = 2.0 * pu.inner(pv);
    if !(lambda > 0.0) {
        return Err(Error::FrameObstruction("conformal factor must be positive"));
    }
    let scale = 1.0 / lambda.sqrt();
    let a = pu.scale(scale).to_matrix();
    let b = pv.scale(scale).to_matrix();
    // A = [[-p s, p^2], [-s^2, p s]],  B = [[r t, -r^2], [t^2, -r t]]
    if !(-a.c > 0.0) {
        return Err(Error::FrameObstruction("phi_u must be future-pointing"));
    }
    if !(-b.b > 0.0) {
        return Err(Error::FrameObstruction("phi_v must be future-pointing"));
    }
    let s = (-a.c).sqrt();
    let p = -a.a / s;
    let mut r = (-b.b).sqrt();
    let mut t = b.a / r;
    if p * t - r * s < 0.0 {
        r = -r;
        t = -t;
    }
    Mat2R::new(p, r, s, t).normalize_sl2()
}

/// `(phi_u, phi_v)` rebuilt from a frame and the conformal factor.
pub fn frame_tangents(phi: Mat2R, omega: f64) -> Result<(Vec3L, Vec3L)> {
    let inv = phi.inverse()?;
    let w = (0.5 * omega).exp();
    let e12 = Mat2R::new(0.0, 1.0, 0.0, 0.0);
    let e21 = Mat2R::new(0.0, 0.0, 1.0, 0.0);
    let pu = Vec4::from_matrix(phi * e12 * inv).imaginary().scale(w);
    let pv = Vec4::from_matrix(phi * e21 * inv).imaginary().scale(w);
    Ok((pu, pv))
}

/// Integration order over the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaxPath {
    /// Along the bottom row in `u`, then up every column in `v`.
    #[default]
    UFirst,
    /// Along the left column in `v`, then across every row in `u`.
    VFirst,
}

/// Frames on the lattice, `frames[i * nv + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub domain: Domain,
    pub nu: usize,
    pub nv: usize,
    pub frames: Vec<Mat2R>,
}

impl FrameField {
    pub fn frame(&self, i: usize, j: usize) -> Mat2R {
        self.frames[i * self.nv + j]
    }

    /// `max |det Phi - 1|`.
    pub fn max_det_drift(&self) -> f64 {
        self.frames
            .iter()
            .map(|m| (m.det() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entry difference to another frame field on the same lattice.
    pub fn max_difference(&self, other: &FrameField) -> f64 {
        self.frames
            .iter()
            .zip(&other.frames)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
    }
}

/// Bound on the step-doubling error estimate of one RK4 step.
const STEP_TOLERANCE: f64 = 1e-6;

fn rk4<F>(phi: Mat2R, t: f64, h: f64, coef: &F) -> Result<Mat2R>
where
    F: Fn(f64) -> Result<Mat2R>,
{
    let k1 = phi * coef(t)?;
    let mid = coef(t + 0.5 * h)?;
    let k2 = (phi + k1.scale(0.5 * h)) * mid;
    let k3 = (phi + k2.scale(0.5 * h)) * mid;
    let k4 = (phi + k3.scale(h)) * coef(t + h)?;
    Ok(phi + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0))
}

/// One step with step doubling; returns the extrapolated value and the estimate.
fn doubled_step<F>(phi: Mat2R, t: f64, h: f64, coef: &F) -> Result<(Mat2R, f64)>
where
    F: Fn(f64) -> Result<Mat2R>,
{
    let full = rk4(phi, t, h, coef)?;
    let half = rk4(rk4(phi, t, 0.5 * h, coef)?, t + 0.5 * h, 0.5 * h, coef)?;
    let diff = half - full;
    Ok((half + diff.scale(1.0 / 15.0), diff.max_abs() / 15.0))
}

/// Integrates `dPhi/dt = Phi C(t)` through the sample points `ts`.
fn sweep<F>(phi0: Mat2R, ts: &[f64], coef: F, at: impl Fn(f64) -> (f64, f64)) -> Result<Vec<Mat2R>>
where
    F: Fn(f64) -> Result<Mat2R>,
{
    let mut out = Vec::with_capacity(ts.len());
    let mut phi = phi0;
    out.push(phi);
    for w in ts.windows(2) {
        let (next, estimate) = doubled_step(phi, w[0], w[1] - w[0], &coef)?;
        if estimate > STEP_TOLERANCE {
            let (u, v) = at(w[0]);
            return Err(Error::StepRejected { u, v, estimate });
        }
        phi = next;
        out.push(phi);
    }
    Ok(out)
}

/// Frame field with `Phi(u0, v0) = phi0` obtained by RK4 along the chosen path.
pub fn integrate_lax_frame<L: LaxFields + ?Sized>(
    fields: &L,
    phi0: Mat2R,
    domain: Domain,
    nu: usize,
    nv: usize,
    path: LaxPath,
) -> Result<FrameField> {
    domain.validate()?;
    check_size(nu, nv)?;
    let phi0 = phi0.normalize_sl2()?;
    let us = domain.us(nu);
    let vs = domain.vs(nv);
    let u_coef = |v: f64| move |u: f64| Ok(lax_coefficients(&fields.sample(u, v)?).u);
    let v_coef = |u: f64| move |v: f64| Ok(lax_coefficients(&fields.sample(u, v)?).v);

    let mut frames = vec![Mat2R::identity(); nu * nv];
    match path {
        LaxPath::UFirst => {
            let v0 = vs[0];
            let row = sweep(phi0, &us, u_coef(v0), |u| (u, v0))?;
            let columns: Vec<Vec<Mat2R>> = us
                .par_iter()
                .zip(&row)
                .map(|(&u, &start)| sweep(start, &vs, v_coef(u), |v| (u, v)))
                .collect::<Result<_>>()?;
            for (i, col) in columns.into_iter().enumerate() {
                frames[i * nv..(i + 1) * nv].copy_from_slice(&col);
            }
        }
        LaxPath::VFirst => {
            let u0 = us[0];
            let column = sweep(phi0, &vs, v_coef(u0), |v| (u0, v))?;
            let rows: Vec<Vec<Mat2R>> = vs
                .par_iter()
                .zip(&column)
                .map(|(&v, &start)| sweep(start, &us, u_coef(v), |u| (u, v)))
                .collect::<Result<_>>()?;
            for (j, row) in rows.into_iter().enumerate() {
                for (i, m) in row.into_iter().enumerate() {
                    frames[i * nv + j] = m;
                }
            }
        }
    }
    Ok(FrameField {
        domain,
        nu,
        nv,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_frame_reproduces_tangents() {
        let d = WeierstrassData::parse("u", "1", "v", "1").unwrap();
        for (u, v) in [(0.0, 0.0), (0.3, -0.4), (-0.5, -0.5)] {
            let pu = d.tangent_u(u).unwrap();
            let pv = d.tangent_v(v).unwrap();
            let phi = coordinate_frame(pu, pv).unwrap();
            assert!((phi.det() - 1.0).abs() < 1e-14);
            let omega = (2.0 * pu.inner(pv)).ln();
            let (a, b) = frame_tangents(phi, omega).unwrap();
            assert!((a - pu).max_abs() < 1e-14);
            assert!((b - pv).max_abs() < 1e-14);
        }
    }

    #[test]
    fn past_pointing_tangent_is_refused() {
        // spacelike catenoid has f < 0
        let d = WeierstrassData::parse("-exp(u)", "-exp(-u)", "exp(-v)", "-exp(v)").unwrap();
        let e = coordinate_frame(d.tangent_u(1.0).unwrap(), d.tangent_v(-1.0).unwrap());
        assert!(matches!(e, Err(Error::FrameObstruction(_))));
    }

    #[test]
    fn flat_fields_keep_the_frame() {
        let d = WeierstrassData::parse("0", "1", "0", "1").unwrap();
        let phi0 = Mat2R::new(2.0, 1.0, 1.0, 1.0);
        let ff = integrate_lax_frame(&d, phi0, Domain::square(1.0), 9, 9, LaxPath::UFirst).unwrap();
        assert!(ff.frames.iter().all(|m| *m == phi0));
    }
}
