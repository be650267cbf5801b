//! String worldsheets: Nambu-Goto action, equations of motion, d'Alembert evolution
//! and the interior Einstein-Hilbert term.
//!
//! Worldsheet coordinates are `(tau, sigma) = (x, y)` with `u = x + y`,
//! `v = -x + y`, so `du dv = 2 dx dy`; [`Chart::area_factor`] holds that factor.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::parse;
use crate::fd::FdScheme;
use crate::geometry::Analyzer;
use crate::grid::{check_size, lattice, Chart, Domain, SurfaceGrid, TangentFn};
use crate::quadrature::{cumulative, simpson_weights, GaussLegendre, POINTS_PER_CELL};
use crate::weierstrass::Curve;
use crate::Vec3L;

/// `T = 1/(2 pi)`, so that `alpha' = 1`.
pub const DEFAULT_TENSION: f64 = 1.0 / (2.0 * PI);

/// Regge slope `alpha' = 1 / (2 pi T)`.
pub fn alpha_prime(tension: f64) -> f64 {
    1.0 / (2.0 * PI * tension)
}

/// Induced metric `h_ab` in `(tau, sigma)`: `(h_tt, h_ts, h_ss)`.
fn induced_metric(px: Vec3L, py: Vec3L) -> (f64, f64, f64) {
    (px.inner(px), px.inner(py), py.inner(py))
}

/// `-det h` below `-SIGNATURE_SLACK * scale` is reported as a signature error.
const SIGNATURE_SLACK: f64 = 1e-12;

fn neg_det(px: Vec3L, py: Vec3L, i: usize, j: usize) -> Result<f64> {
    let (tt, ts, ss) = induced_metric(px, py);
    let d = ts * ts - tt * ss;
    let scale = tt.abs().max(ss.abs()).max(1.0);
    if d < -SIGNATURE_SLACK * scale * scale {
        return Err(Error::SignatureError { i, j });
    }
    Ok(d.max(0.0))
}

/// Product Simpson weights on the lattice, in units of `dx dy`.
fn area_weights(grid: &SurfaceGrid) -> (Vec<f64>, Vec<f64>, f64) {
    let (ha, hb) = grid.spacing();
    (
        simpson_weights(grid.nu, ha),
        simpson_weights(grid.nv, hb),
        grid.chart.area_factor(),
    )
}

/// `S = -T int sqrt(-det h) dtau dsigma` by product Simpson quadrature.
pub fn nambu_goto_action(s: &SurfaceGrid, tension: f64, scheme: FdScheme) -> Result<f64> {
    let an = Analyzer::new(s, scheme)?;
    let (wa, wb, factor) = area_weights(s);
    let mut total = 0.0;
    for (i, j) in s.nodes() {
        let jet = an.jet(i, j);
        let d = neg_det(jet.px(), jet.py(), i, j)?;
        total += wa[i] * wb[j] * d.sqrt();
    }
    Ok(-tension * total * factor)
}

/// `int |e^omega| dx dy` over the regular nodes.
pub fn conformal_area(s: &SurfaceGrid, scheme: FdScheme) -> Result<f64> {
    let an = Analyzer::new(s, scheme)?;
    let (wa, wb, factor) = area_weights(s);
    Ok(an
        .regular_nodes()
        .into_iter()
        .map(|(i, j)| wa[i] * wb[j] * an.fields(i, j).unwrap().forms.lambda.abs())
        .sum::<f64>()
        * factor)
}

/// Largest `sqrt(|<box phi, box phi>|)` over interior nodes, with
/// `box phi = -phi_tt + phi_ss = 4 phi_uv` from lattice differences of the points.
pub fn wave_residual(s: &SurfaceGrid, scheme: FdScheme) -> Result<f64> {
    let an = Analyzer::from_points(s, scheme)?;
    Ok(s.nodes()
        .filter(|&(i, j)| an.is_interior(i, j))
        .map(|(i, j)| {
            let b = an.jet(i, j).puv * 4.0;
            b.inner(b).abs().sqrt()
        })
        .fold(0.0, f64::max))
}

/// Largest component of `d_tau P^tau + d_sigma P^sigma` over interior nodes, where
///
/// ```text
/// P^tau   = T (h_ss phi_t - h_ts phi_s) / sqrt(-det h)
/// P^sigma = T (h_tt phi_s - h_ts phi_t) / sqrt(-det h)
/// ```
///
/// are the momenta of `L = -T sqrt(-det h)`. Nodes next to degenerate ones are skipped.
pub fn euler_lagrange_residual(s: &SurfaceGrid, tension: f64, scheme: FdScheme) -> Result<f64> {
    let an = Analyzer::new(s, scheme)?;
    let nodes: Vec<(usize, usize)> = s.nodes().collect();
    let momenta: Vec<(Vec3L, Vec3L)> = nodes
        .iter()
        .map(|&(i, j)| {
            let jet = an.jet(i, j);
            let (px, py) = (jet.px(), jet.py());
            let d = neg_det(px, py, i, j)?;
            if d.sqrt() < crate::DEGENERACY_THRESHOLD || s.is_degenerate(i, j) {
                let nan = Vec3L::new(f64::NAN, f64::NAN, f64::NAN);
                return Ok((nan, nan));
            }
            let (tt, ts, ss) = induced_metric(px, py);
            let w = tension / d.sqrt();
            Ok(((px * ss - py * ts) * w, (py * tt - px * ts) * w))
        })
        .collect::<Result<_>>()?;
    let p_tau: Vec<Vec3L> = momenta.iter().map(|m| m.0).collect();
    let p_sigma: Vec<Vec3L> = momenta.iter().map(|m| m.1).collect();
    let worst = nodes
        .par_iter()
        .filter(|&&(i, j)| an.is_interior(i, j))
        .map(|&(i, j)| {
            let (dt, _) = an.vector_xy_derivatives(&p_tau, i, j);
            let (_, ds) = an.vector_xy_derivatives(&p_sigma, i, j);
            let div = dt + ds;
            let m = div.max_abs();
            if m.is_finite() {
                m
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Interior Einstein-Hilbert term and the number of degenerate nodes left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinHilbert {
    pub value: f64,
    pub skipped: usize,
}

/// `(1 / (2 pi alpha')) int K dA` with `dA = |e^omega| dx dy`.
pub fn einstein_hilbert_interior(
    s: &SurfaceGrid,
    alpha_prime: f64,
    scheme: FdScheme,
) -> Result<EinsteinHilbert> {
    let an = Analyzer::new(s, scheme)?;
    let (wa, wb, factor) = area_weights(s);
    let mut total = 0.0;
    let mut skipped = 0;
    for (i, j) in s.nodes() {
        match an.fields(i, j) {
            Some(f) => total += wa[i] * wb[j] * f.k * f.forms.lambda.abs(),
            None => skipped += 1,
        }
    }
    Ok(EinsteinHilbert {
        value: total * factor / (2.0 * PI * alpha_prime),
        skipped,
    })
}

/// Initial data of a string at `tau = 0`.
#[derive(Debug, Clone)]
pub struct StringState {
    /// `phi(sigma)`, one curve per component.
    pub position: [Curve; 3],
    /// `phi_tau(sigma)`.
    pub velocity: [Curve; 3],
    pub sigma: (f64, f64),
    /// Lattice points along `sigma`.
    pub samples: usize,
    pub tension: f64,
}

fn curve_in_s(field: &'static str, text: &str) -> Result<Curve> {
    let e = parse(text)?;
    match e.var_name() {
        Some(name) if name != "s" => Err(Error::VariableMismatch {
            field,
            expected: "s",
            found: name.to_owned(),
        }),
        _ => Ok(Curve::symbolic(e)),
    }
}

impl StringState {
    /// Components are expressions in `s` (the string parameter `sigma`).
    pub fn parse(
        position: [&str; 3],
        velocity: [&str; 3],
        sigma: (f64, f64),
        samples: usize,
        tension: f64,
    ) -> Result<Self> {
        let mut pos = Vec::new();
        let mut vel = Vec::new();
        for k in 0..3 {
            pos.push(curve_in_s("position", position[k])?);
            vel.push(curve_in_s("velocity", velocity[k])?);
        }
        let state = Self {
            position: pos.try_into().expect("three components"),
            velocity: vel.try_into().expect("three components"),
            sigma,
            samples,
            tension,
        };
        state.validate()?;
        Ok(state)
    }

    fn validate(&self) -> Result<()> {
        Domain::new(0.0, 1.0, self.sigma.0, self.sigma.1)?;
        check_size(2, self.samples)?;
        if !(self.tension > 0.0 && self.tension.is_finite()) {
            return Err(Error::InvalidGrid("tension must be positive".into()));
        }
        Ok(())
    }

    pub fn alpha_prime(&self) -> f64 {
        alpha_prime(self.tension)
    }

    fn eval3(c: &[Curve; 3], s: f64) -> Result<Vec3L> {
        Ok(Vec3L::new(c[0].eval(s)?, c[1].eval(s)?, c[2].eval(s)?))
    }

    fn deriv3(c: &[Curve; 3], s: f64) -> Result<Vec3L> {
        Ok(Vec3L::new(
            c[0].derivative(s)?,
            c[1].derivative(s)?,
            c[2].derivative(s)?,
        ))
    }

    pub fn position_at(&self, s: f64) -> Result<Vec3L> {
        Self::eval3(&self.position, s)
    }

    pub fn velocity_at(&self, s: f64) -> Result<Vec3L> {
        Self::eval3(&self.velocity, s)
    }

    /// `phi_sigma(s)`.
    pub fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        Self::deriv3(&self.position, s)
    }

    /// `X'(u) = (phi_sigma + phi_tau)(u) / 2`.
    pub fn right_mover(&self, u: f64) -> Result<Vec3L> {
        Ok((self.tangent_at(u)? + self.velocity_at(u)?) * 0.5)
    }

    /// `Y'(v) = (phi_sigma - phi_tau)(v) / 2`.
    pub fn left_mover(&self, v: f64) -> Result<Vec3L> {
        Ok((self.tangent_at(v)? - self.velocity_at(v)?) * 0.5)
    }

    /// Largest violation of `<phi_t, phi_s> = 0` and `<phi_t, phi_t> + <phi_s, phi_s> = 0`
    /// over the sigma lattice.
    pub fn constraint_residuals(&self) -> Result<(f64, f64)> {
        let mut cross = 0.0f64;
        let mut energy = 0.0f64;
        for s in lattice(self.sigma.0, self.sigma.1, self.samples) {
            let t = self.velocity_at(s)?;
            let d = self.tangent_at(s)?;
            cross = cross.max(t.inner(d).abs());
            energy = energy.max((t.inner(t) + d.inner(d)).abs());
        }
        Ok((cross, energy))
    }

    pub fn check_constraints(&self) -> Result<()> {
        let (cross, energy) = self.constraint_residuals()?;
        if cross > 1e-8 {
            return Err(Error::ConstraintViolation {
                what: "<phi_tau, phi_sigma>",
                residual: cross,
            });
        }
        if energy > 1e-8 {
            return Err(Error::ConstraintViolation {
                what: "<phi_tau, phi_tau> + <phi_sigma, phi_sigma>",
                residual: energy,
            });
        }
        Ok(())
    }
}

/// Running integral of `f` from `anchor`, evaluated at every value in `ts`.
fn integral_table<F>(ts: &mut Vec<f64>, anchor: f64, f: F) -> Result<Vec<Vec3L>>
where
    F: Fn(f64) -> Result<Vec3L>,
{
    ts.push(anchor);
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite lattice values"));
    ts.dedup();
    let rule = GaussLegendre::<f64>::new(POINTS_PER_CELL);
    let running = cumulative(&rule, ts, f)?;
    let k = ts.binary_search_by(|t| t.partial_cmp(&anchor).unwrap()).unwrap();
    let base = running[k];
    Ok(running.into_iter().map(|x| x - base).collect())
}

fn lookup(ts: &[f64], values: &[Vec3L], t: f64) -> Vec3L {
    let k = ts
        .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        .expect("value was tabulated");
    values[k]
}

/// Evolves the string with the d'Alembert split `phi = X(tau + sigma) + Y(sigma - tau)`
/// on `tau in [0, tau_max]` (`n_tau` samples); the result is an isothermal-chart grid
/// with axes `(tau, sigma)`.
pub fn dalembert_evolve(st: &StringState, tau_max: f64, n_tau: usize) -> Result<SurfaceGrid> {
    st.validate()?;
    st.check_constraints()?;
    let domain = Domain::new(0.0, tau_max, st.sigma.0, st.sigma.1)?;
    check_size(n_tau, st.samples)?;
    let taus = domain.us(n_tau);
    let sigmas = domain.vs(st.samples);
    let s0 = st.sigma.0;

    let mut us: Vec<f64> = Vec::with_capacity(n_tau * st.samples);
    let mut vs: Vec<f64> = Vec::with_capacity(n_tau * st.samples);
    for &t in &taus {
        for &s in &sigmas {
            let (u, v) = Chart::Isothermal.to_null(t, s);
            us.push(u);
            vs.push(v);
        }
    }
    let (xs, ys) = rayon::join(
        || integral_table(&mut us, s0, |u| st.right_mover(u)).map(|x| (us, x)),
        || integral_table(&mut vs, s0, |v| st.left_mover(v)).map(|y| (vs, y)),
    );
    let ((us, x), (vs, y)) = (xs?, ys?);
    let half = st.position_at(s0)? * 0.5;

    let mut points = Vec::with_capacity(n_tau * st.samples);
    for &t in &taus {
        for &s in &sigmas {
            let (u, v) = Chart::Isothermal.to_null(t, s);
            points.push(half + lookup(&us, &x, u) + half + lookup(&vs, &y, v));
        }
    }
    let state = st.clone();
    let tangents: TangentFn = Arc::new(move |u, v| Ok((state.right_mover(u)?, state.left_mover(v)?)));
    let mut grid = SurfaceGrid {
        chart: Chart::Isothermal,
        domain,
        nu: n_tau,
        nv: st.samples,
        points,
        degenerate: vec![false; n_tau * st.samples],
        split: None,
        tangents: Some(tangents.clone()),
    };
    for (i, j) in grid.nodes().collect::<Vec<_>>() {
        let (u, v) = grid.null_coords(i, j);
        let (a, b) = tangents(u, v)?;
        let k = grid.index(i, j);
        grid.degenerate[k] = (2.0 * a.inner(b)).abs() < crate::DEGENERACY_THRESHOLD;
    }
    Ok(grid)
}
