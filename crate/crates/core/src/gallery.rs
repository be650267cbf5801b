//! Named example surfaces with closed-form oracles.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::grid::{Domain, SurfaceGrid};
use crate::weierstrass::{integrate_surface, pseudosphere_surface, WeierstrassData};
use crate::Vec3L;

pub type CurveOracle = Arc<dyn Fn(f64) -> Vec3L + Send + Sync>;
pub type FieldOracle = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const NAMES: [&str; 8] = [
    "plane",
    "enneper_plus",
    "enneper_minus",
    "catenoid_spacelike",
    "helicoid_spacelike",
    "catenoid_timelike",
    "helicoid_timelike",
    "pseudosphere",
];

/// How an entry is generated.
#[derive(Debug, Clone)]
pub enum Source {
    Weierstrass(WeierstrassData),
    /// `center - P(q, r) / h`, see [`pseudosphere_surface`].
    Pseudosphere {
        h: f64,
        center: Vec3L,
        q: Expr,
        r: Expr,
    },
}

#[derive(Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub source: Source,
    /// `X(u)` and `Y(v)` with `phi = X + Y`.
    pub closed_x: Option<CurveOracle>,
    pub closed_y: Option<CurveOracle>,
    /// Signed conformal factor `e^omega = 2 <phi_u, phi_v>`.
    pub metric: FieldOracle,
    pub gaussian_curvature: FieldOracle,
    pub mean_curvature: f64,
    /// Hopf pair `(Q, R)`.
    pub hopf: (f64, f64),
    pub epsilon: Option<f64>,
    pub default_domain: Domain,
}

impl std::fmt::Debug for GalleryEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GalleryEntry")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("mean_curvature", &self.mean_curvature)
            .field("hopf", &self.hopf)
            .field("epsilon", &self.epsilon)
            .field("default_domain", &self.default_domain)
            .finish_non_exhaustive()
    }
}

impl GalleryEntry {
    pub fn data(&self) -> Option<&WeierstrassData> {
        match &self.source {
            Source::Weierstrass(d) => Some(d),
            Source::Pseudosphere { .. } => None,
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.mean_curvature == 0.0
    }

    pub fn build(&self, domain: Domain, nu: usize, nv: usize) -> Result<SurfaceGrid> {
        match &self.source {
            Source::Weierstrass(d) => integrate_surface(d, domain, nu, nv),
            Source::Pseudosphere { h, center, q, r } => {
                pseudosphere_surface(*h, *center, q, r, domain, nu, nv)
            }
        }
    }

    pub fn build_default(&self, nu: usize, nv: usize) -> Result<SurfaceGrid> {
        self.build(self.default_domain, nu, nv)
    }

    /// `X(u) + Y(v)` when both closed forms exist.
    pub fn closed_point(&self, u: f64, v: f64) -> Option<Vec3L> {
        Some(self.closed_x.as_ref()?(u) + self.closed_y.as_ref()?(v))
    }
}

pub fn list() -> &'static [&'static str] {
    &NAMES
}

fn data(q: &str, f: &str, r: &str, g: &str) -> WeierstrassData {
    WeierstrassData::parse(q, f, r, g).expect("gallery expressions parse")
}

fn curve(f: impl Fn(f64) -> Vec3L + Send + Sync + 'static) -> Option<CurveOracle> {
    Some(Arc::new(f))
}

fn field(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> FieldOracle {
    Arc::new(f)
}

fn plane() -> GalleryEntry {
    GalleryEntry {
        name: "plane",
        source: Source::Weierstrass(data("0", "1", "0", "1")),
        closed_x: curve(|u| Vec3L::new(0.5 * u, -0.5 * u, 0.0)),
        closed_y: curve(|v| Vec3L::new(-0.5 * v, -0.5 * v, 0.0)),
        metric: field(|_, _| 1.0),
        gaussian_curvature: field(|_, _| 0.0),
        mean_curvature: 0.0,
        hopf: (0.0, 0.0),
        epsilon: None,
        default_domain: Domain::new(-1.0, 1.0, -0.5, 0.5).unwrap(),
    }
}

fn enneper(name: &'static str, eps: f64) -> GalleryEntry {
    let q = if eps > 0.0 { "u" } else { "-u" };
    GalleryEntry {
        name,
        source: Source::Weierstrass(data(q, "1", "v", "1")),
        closed_x: curve(move |u| {
            Vec3L::new(u + u.powi(3) / 3.0, -u + u.powi(3) / 3.0, -eps * u * u) * 0.5
        }),
        closed_y: curve(|v| Vec3L::new(-v - v.powi(3) / 3.0, -v + v.powi(3) / 3.0, -v * v) * 0.5),
        metric: field(move |u, v| (1.0 + eps * u * v).powi(2)),
        gaussian_curvature: field(move |u, v| -4.0 * eps * (1.0 + eps * u * v).powi(-4)),
        mean_curvature: 0.0,
        hopf: (eps, 1.0),
        epsilon: Some(eps),
        default_domain: Domain::square(0.8),
    }
}

/// Spacelike axis; `sign = 1` for the catenoid, `-1` for the helicoid `X - Y`.
fn spacelike(name: &'static str, sign: f64) -> GalleryEntry {
    let g = if sign > 0.0 { "-exp(v)" } else { "exp(v)" };
    let metric = move |u: f64, v: f64| sign * 2.0 * ((u - v).cosh() - 1.0);
    GalleryEntry {
        name,
        source: Source::Weierstrass(data("-exp(u)", "-exp(-u)", "exp(-v)", g)),
        closed_x: curve(|u| Vec3L::new(-u.sinh(), -u.cosh(), -u)),
        closed_y: curve(move |v| Vec3L::new(v.sinh(), v.cosh(), v) * sign),
        metric: field(metric),
        gaussian_curvature: field(move |u, v| -4.0 * sign / metric(u, v).powi(2)),
        mean_curvature: 0.0,
        hopf: (1.0, sign),
        epsilon: None,
        default_domain: Domain::new(0.5, 1.5, -1.5, -0.5).unwrap(),
    }
}

/// Timelike axis; `sign = 1` for the catenoid, `-1` for the helicoid `X - Y`.
fn timelike(name: &'static str, sign: f64) -> GalleryEntry {
    let g = if sign > 0.0 { "-(1 + cos(v))" } else { "1 + cos(v)" };
    let metric = move |u: f64, v: f64| sign * 2.0 * (1.0 - (u - v).cos());
    GalleryEntry {
        name,
        source: Source::Weierstrass(data(
            "sin(u) / (-1 + cos(u))",
            "-1 + cos(u)",
            "sin(v) / (1 + cos(v))",
            g,
        )),
        closed_x: curve(|u| Vec3L::new(-u, -u.sin(), u.cos())),
        closed_y: curve(move |v| Vec3L::new(v, v.sin(), -v.cos()) * sign),
        metric: field(metric),
        gaussian_curvature: field(move |u, v| -4.0 * sign / metric(u, v).powi(2)),
        mean_curvature: 0.0,
        hopf: (-1.0, -sign),
        epsilon: None,
        default_domain: Domain::new(0.6 * PI, 1.4 * PI, -0.4 * PI, 0.4 * PI).unwrap(),
    }
}

/// Unit pseudosphere with `q = v`, `r = u`, the orientation giving `H = 1`.
fn pseudosphere() -> GalleryEntry {
    GalleryEntry {
        name: "pseudosphere",
        source: Source::Pseudosphere {
            h: 1.0,
            center: Vec3L::zero(),
            q: parse("v").unwrap(),
            r: parse("u").unwrap(),
        },
        closed_x: None,
        closed_y: None,
        metric: field(|u, v| 4.0 / (1.0 + u * v).powi(2)),
        gaussian_curvature: field(|_, _| 1.0),
        mean_curvature: 1.0,
        hopf: (0.0, 0.0),
        epsilon: None,
        default_domain: Domain::square(0.5),
    }
}

pub fn get(name: &str) -> Result<GalleryEntry> {
    Ok(match name {
        "plane" => plane(),
        "enneper_plus" => enneper("enneper_plus", 1.0),
        "enneper_minus" => enneper("enneper_minus", -1.0),
        "catenoid_spacelike" => spacelike("catenoid_spacelike", 1.0),
        "helicoid_spacelike" => spacelike("helicoid_spacelike", -1.0),
        "catenoid_timelike" => timelike("catenoid_timelike", 1.0),
        "helicoid_timelike" => timelike("helicoid_timelike", -1.0),
        "pseudosphere" => pseudosphere(),
        other => return Err(Error::UnknownName(other.to_owned())),
    })
}
