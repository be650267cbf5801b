//! Rectangular lattices of surface points.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::Vec3L;

/// Axis-aligned parameter rectangle `[u0, u1] x [v0, v1]`.
///
/// For an [`Chart::Isothermal`] grid the two axes are `x` and `y` instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Domain {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        let d = Self { u0, u1, v0, v1 };
        d.validate()?;
        Ok(d)
    }

    pub fn square(a: f64) -> Self {
        Self {
            u0: -a,
            u1: a,
            v0: -a,
            v1: a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.u0, self.u1, self.v0, self.v1];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("domain bounds must be finite".into()));
        }
        if self.u1 <= self.u0 || self.v1 <= self.v0 {
            return Err(Error::InvalidGrid("domain must have u0 < u1 and v0 < v1".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.u1 - self.u0
    }

    pub fn height(&self) -> f64 {
        self.v1 - self.v0
    }

    /// `n` equally spaced samples of the first axis, endpoints included.
    pub fn us(&self, n: usize) -> Vec<f64> {
        lattice(self.u0, self.u1, n)
    }

    pub fn vs(&self, n: usize) -> Vec<f64> {
        lattice(self.v0, self.v1, n)
    }
}

pub(crate) fn lattice(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lattice_at(a, b, n, k)).collect()
}

/// Which coordinates the lattice axes are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chart {
    /// Axes are the null coordinates `(u, v)`.
    #[default]
    Null,
    /// Axes are `(x, y) = (tau, sigma)` with `u = x + y`, `v = -x + y`.
    Isothermal,
}

impl Chart {
    /// Null coordinates of the lattice point with axis coordinates `(a, b)`.
    pub fn to_null(self, a: f64, b: f64) -> (f64, f64) {
        match self {
            Chart::Null => (a, b),
            Chart::Isothermal => (a + b, -a + b),
        }
    }

    /// Area of one unit of `da db` measured in `dx dy`.
    pub fn area_factor(self) -> f64 {
        match self {
            // du dv = 2 dx dy
            Chart::Null => 0.5,
            Chart::Isothermal => 1.0,
        }
    }
}

/// Exact tangents `(phi_u, phi_v)` as a function of the null coordinates.
pub type TangentFn = Arc<dyn Fn(f64, f64) -> Result<(Vec3L, Vec3L)> + Send + Sync>;

/// The two halves of `phi(u_i, v_j) = x[i] + y[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub x: Vec<Vec3L>,
    pub y: Vec<Vec3L>,
}

/// Lattice of surface points, `points[i * nv + j]` at `(us[i], vs[j])`.
#[derive(Clone)]
pub struct SurfaceGrid {
    pub chart: Chart,
    pub domain: Domain,
    pub nu: usize,
    pub nv: usize,
    pub points: Vec<Vec3L>,
    /// `true` where the metric degenerates; such nodes are skipped by statistics.
    pub degenerate: Vec<bool>,
    pub split: Option<Split>,
    pub tangents: Option<TangentFn>,
}

impl fmt::Debug for SurfaceGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceGrid")
            .field("chart", &self.chart)
            .field("domain", &self.domain)
            .field("nu", &self.nu)
            .field("nv", &self.nv)
            .field("degenerate", &self.degenerate.iter().filter(|d| **d).count())
            .field("split", &self.split.is_some())
            .field("tangents", &self.tangents.is_some())
            .finish()
    }
}

pub(crate) fn check_size(nu: usize, nv: usize) -> Result<()> {
    if !(2..=4097).contains(&nu) || !(2..=4097).contains(&nv) {
        return Err(Error::InvalidGrid(format!(
            "lattice size {nu}x{nv} outside 2..=4097"
        )));
    }
    Ok(())
}

impl SurfaceGrid {
    /// Samples `f(a, b)` on the lattice, rows in parallel.
    pub fn from_fn<F>(chart: Chart, domain: Domain, nu: usize, nv: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<Vec3L> + Sync,
    {
        domain.validate()?;
        check_size(nu, nv)?;
        let us = domain.us(nu);
        let vs = domain.vs(nv);
        let rows: Vec<Vec<Vec3L>> = us
            .par_iter()
            .map(|&a| vs.iter().map(|&b| f(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Self {
            chart,
            domain,
            nu,
            nv,
            points: rows.into_iter().flatten().collect(),
            degenerate: vec![false; nu * nv],
            split: None,
            tangents: None,
        })
    }

    pub fn with_tangents(mut self, tangents: TangentFn) -> Self {
        self.tangents = Some(tangents);
        self
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    pub fn point(&self, i: usize, j: usize) -> Vec3L {
        self.points[self.index(i, j)]
    }

    pub fn is_degenerate(&self, i: usize, j: usize) -> bool {
        self.degenerate[self.index(i, j)]
    }

    pub fn us(&self) -> Vec<f64> {
        self.domain.us(self.nu)
    }

    pub fn vs(&self) -> Vec<f64> {
        self.domain.vs(self.nv)
    }

    /// Lattice spacings along the two axes.
    pub fn spacing(&self) -> (f64, f64) {
        (
            self.domain.width() / (self.nu - 1) as f64,
            self.domain.height() / (self.nv - 1) as f64,
        )
    }

    /// Axis coordinates of node `(i, j)`, identical to `us()[i]` and `vs()[j]`.
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        let d = &self.domain;
        (
            lattice_at(d.u0, d.u1, self.nu, i),
            lattice_at(d.v0, d.v1, self.nv, j),
        )
    }

    /// Null coordinates of node `(i, j)`.
    pub fn null_coords(&self, i: usize, j: usize) -> (f64, f64) {
        let (a, b) = self.coords(i, j);
        self.chart.to_null(a, b)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.nu).flat_map(move |i| (0..self.nv).map(move |j| (i, j)))
    }

    /// Largest coordinate difference to another grid of the same shape.
    pub fn max_difference(&self, other: &SurfaceGrid) -> f64 {
        assert_eq!((self.nu, self.nv), (other.nu, other.nv), "grid shapes differ");
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
    }

    /// Copy translated so that node `(0, 0)` sits at the origin.
    pub fn anchored(&self) -> SurfaceGrid {
        let origin = self.points[0];
        let mut out = self.clone();
        for p in &mut out.points {
            *p = *p - origin;
        }
        out
    }
}

fn lattice_at(a: f64, b: f64, n: usize, k: usize) -> f64 {
    if k + 1 == n {
        b
    } else {
        a + (b - a) * (k as f64 / (n - 1) as f64)
    }
}
