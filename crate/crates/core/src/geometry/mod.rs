//! Finite-difference analysis of surface grids.
//!
//! Everything is measured in null coordinates `(u, v)` with `x = (u - v)/2`,
//! `y = (u + v)/2`. The conformal factor is taken with its sign,
//! `lambda = 2 <phi_u, phi_v>`, and `omega = ln |lambda|`, so that surfaces whose
//! `u`-tangent is past-pointing (helicoids) are handled by the same formulas:
//!
//! ```text
//! H = 2 <phi_uv, N> / lambda        Q = <phi_uu, N>      R = <phi_vv, N>
//! K = H^2 - 4 Q R / lambda^2
//! ```
//!
//! The normal is `sign(lambda) * (phi_x x phi_y) / |phi_x x phi_y|`.

mod gauss_map;
mod lax;

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd::{lattice_stencils, FdScheme, Stencil};
use crate::grid::{Chart, SurfaceGrid};
use crate::{Vec3L, DEGENERACY_THRESHOLD};

pub use gauss_map::{
    gmap_pde_residual, inverse_stereographic, project_gauss_map, stereographic_partials,
    umbilic_points,
};
pub use lax::{
    coordinate_frame, frame_tangents, integrate_lax_frame, lax_coefficients, FrameField,
    LaxCoefficients,
    LaxFields, LaxPath, LaxSample,
};

/// Position and derivatives up to second order in null coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub p: Vec3L,
    pub pu: Vec3L,
    pub pv: Vec3L,
    pub puu: Vec3L,
    pub puv: Vec3L,
    pub pvv: Vec3L,
}

impl Jet {
    pub fn px(&self) -> Vec3L {
        self.pu - self.pv
    }

    pub fn py(&self) -> Vec3L {
        self.pu + self.pv
    }

    pub fn pxx(&self) -> Vec3L {
        self.puu - self.puv * 2.0 + self.pvv
    }

    pub fn pxy(&self) -> Vec3L {
        self.puu - self.pvv
    }

    pub fn pyy(&self) -> Vec3L {
        self.puu + self.puv * 2.0 + self.pvv
    }
}

/// First and second fundamental forms in `(x, y)`, plus the conformal factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    /// `ln |2 <phi_u, phi_v>|`
    pub omega: f64,
    /// `2 <phi_u, phi_v>` with its sign.
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPair {
    pub q: f64,
    pub r: f64,
}

/// Everything measured at one non-degenerate node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeFields {
    pub forms: FundamentalForms,
    pub normal: Vec3L,
    /// Mean curvature from the null-coordinate formula.
    pub h: f64,
    /// Mean curvature from `(G l + E n - 2 F m) / (2 (E G - F^2))`.
    pub h_classical: f64,
    pub hopf: HopfPair,
    pub k: f64,
}

fn measure(jet: &Jet) -> Option<NodeFields> {
    let lambda = 2.0 * jet.pu.inner(jet.pv);
    if !lambda.is_finite() || lambda.abs() < DEGENERACY_THRESHOLD {
        return None;
    }
    let (px, py) = (jet.px(), jet.py());
    let c = px.cross(py);
    let cc = c.inner(c);
    if cc <= 0.0 {
        return None;
    }
    let normal = c * (lambda.signum() / cc.sqrt());
    let e = px.inner(px);
    let f = px.inner(py);
    let g = py.inner(py);
    let l = jet.pxx().inner(normal);
    let m = jet.pxy().inner(normal);
    let n = jet.pyy().inner(normal);
    let h = 2.0 * jet.puv.inner(normal) / lambda;
    let h_classical = (g * l + e * n - 2.0 * f * m) / (2.0 * (e * g - f * f));
    let q = jet.puu.inner(normal);
    let r = jet.pvv.inner(normal);
    let k = h * h - 4.0 * q * r / (lambda * lambda);
    Some(NodeFields {
        forms: FundamentalForms {
            e,
            f,
            g,
            l,
            m,
            n,
            omega: lambda.abs().ln(),
            lambda,
        },
        normal,
        h,
        h_classical,
        hopf: HopfPair { q, r },
        k,
    })
}

/// Measures a [`SurfaceGrid`] once and answers per-node queries.
pub struct Analyzer<'a> {
    grid: &'a SurfaceGrid,
    scheme: FdScheme,
    d1a: Vec<Stencil>,
    d2a: Vec<Stencil>,
    d1b: Vec<Stencil>,
    d2b: Vec<Stencil>,
    jets: Vec<Jet>,
    fields: Vec<Option<NodeFields>>,
    gc_fields: OnceLock<[Vec<f64>; 4]>,
}

impl<'a> Analyzer<'a> {
    /// Uses the grid's exact tangents when it carries them, lattice differences
    /// otherwise.
    pub fn new(grid: &'a SurfaceGrid, scheme: FdScheme) -> Result<Self> {
        Self::build(grid, scheme, true)
    }

    /// Ignores exact tangents; every derivative is a lattice difference of points.
    pub fn from_points(grid: &'a SurfaceGrid, scheme: FdScheme) -> Result<Self> {
        Self::build(grid, scheme, false)
    }

    fn build(grid: &'a SurfaceGrid, scheme: FdScheme, use_tangents: bool) -> Result<Self> {
        let need = scheme.min_points();
        if grid.nu < need || grid.nv < need {
            return Err(Error::InvalidGrid(format!(
                "{:?} differences need at least {need} nodes per axis",
                scheme
            )));
        }
        let (ha, hb) = grid.spacing();
        let mut an = Self {
            grid,
            scheme,
            d1a: lattice_stencils(grid.nu, ha, 1, scheme),
            d2a: lattice_stencils(grid.nu, ha, 2, scheme),
            d1b: lattice_stencils(grid.nv, hb, 1, scheme),
            d2b: lattice_stencils(grid.nv, hb, 2, scheme),
            jets: Vec::new(),
            fields: Vec::new(),
            gc_fields: OnceLock::new(),
        };
        let nodes: Vec<(usize, usize)> = grid.nodes().collect();
        let jets: Vec<Jet> = match (&grid.tangents, use_tangents) {
            (Some(t), true) => {
                let tangents: Vec<(Vec3L, Vec3L)> = nodes
                    .par_iter()
                    .map(|&(i, j)| {
                        let (u, v) = grid.null_coords(i, j);
                        t(u, v)
                    })
                    .collect::<Result<_>>()?;
                // lattice-axis first derivatives
                let axis: Vec<(Vec3L, Vec3L)> = tangents
                    .iter()
                    .map(|&(tu, tv)| match grid.chart {
                        Chart::Null => (tu, tv),
                        Chart::Isothermal => (tu - tv, tu + tv),
                    })
                    .collect();
                let an = &an;
                nodes
                    .par_iter()
                    .map(|&(i, j)| {
                        let pa = |k: usize, l: usize| axis[k * grid.nv + l].0;
                        let pb = |k: usize, l: usize| axis[k * grid.nv + l].1;
                        let paa = an.along_a(1, i, j, pa);
                        let pbb = an.along_b(1, i, j, pb);
                        let pab = (an.along_b(1, i, j, pa) + an.along_a(1, i, j, pb)) * 0.5;
                        an.to_null(grid.point(i, j), pa(i, j), pb(i, j), paa, pab, pbb)
                    })
                    .collect()
            }
            _ => {
                let an = &an;
                let p = |k: usize, l: usize| grid.point(k, l);
                nodes
                    .par_iter()
                    .map(|&(i, j)| {
                        an.to_null(
                            grid.point(i, j),
                            an.along_a(1, i, j, p),
                            an.along_b(1, i, j, p),
                            an.along_a(2, i, j, p),
                            an.mixed(i, j, p),
                            an.along_b(2, i, j, p),
                        )
                    })
                    .collect()
            }
        };
        an.fields = jets
            .par_iter()
            .zip(&grid.degenerate)
            .map(|(jet, &flag)| if flag { None } else { measure(jet) })
            .collect();
        an.jets = jets;
        Ok(an)
    }

    fn along_a<V, F>(&self, m: usize, i: usize, j: usize, f: F) -> V
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V> + Default,
        F: Fn(usize, usize) -> V,
    {
        let st = if m == 1 { &self.d1a[i] } else { &self.d2a[i] };
        st.apply(i, |k| f(k, j))
    }

    fn along_b<V, F>(&self, m: usize, i: usize, j: usize, f: F) -> V
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V> + Default,
        F: Fn(usize, usize) -> V,
    {
        let st = if m == 1 { &self.d1b[j] } else { &self.d2b[j] };
        st.apply(j, |l| f(i, l))
    }

    fn mixed<V, F>(&self, i: usize, j: usize, f: F) -> V
    where
        V: std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V> + Default,
        F: Fn(usize, usize) -> V,
    {
        self.d1a[i].apply(i, |k| self.d1b[j].apply(j, |l| f(k, l)))
    }

    /// Converts lattice-axis derivatives to null-coordinate ones.
    fn to_null(&self, p: Vec3L, pa: Vec3L, pb: Vec3L, paa: Vec3L, pab: Vec3L, pbb: Vec3L) -> Jet {
        match self.grid.chart {
            Chart::Null => Jet {
                p,
                pu: pa,
                pv: pb,
                puu: paa,
                puv: pab,
                pvv: pbb,
            },
            Chart::Isothermal => Jet {
                p,
                pu: (pa + pb) * 0.5,
                pv: (pb - pa) * 0.5,
                puu: (paa + pab * 2.0 + pbb) * 0.25,
                puv: (pbb - paa) * 0.25,
                pvv: (paa - pab * 2.0 + pbb) * 0.25,
            },
        }
    }

    /// `(d/du, d/dv, d2/dudv)` of a per-node scalar field.
    pub(crate) fn field_derivatives(&self, s: &[f64], i: usize, j: usize) -> (f64, f64, f64) {
        let nv = self.grid.nv;
        let at = |k: usize, l: usize| s[k * nv + l];
        let da = self.along_a(1, i, j, at);
        let db = self.along_b(1, i, j, at);
        match self.grid.chart {
            Chart::Null => (da, db, self.mixed(i, j, at)),
            Chart::Isothermal => {
                let daa = self.along_a(2, i, j, at);
                let dbb = self.along_b(2, i, j, at);
                (0.5 * (da + db), 0.5 * (db - da), 0.25 * (dbb - daa))
            }
        }
    }

    /// `(d/dx, d/dy)` of a per-node vector field.
    pub(crate) fn vector_xy_derivatives(&self, s: &[Vec3L], i: usize, j: usize) -> (Vec3L, Vec3L) {
        let nv = self.grid.nv;
        let at = |k: usize, l: usize| s[k * nv + l];
        let da = self.along_a(1, i, j, at);
        let db = self.along_b(1, i, j, at);
        match self.grid.chart {
            // d/dx = d/du - d/dv, d/dy = d/du + d/dv
            Chart::Null => (da - db, da + db),
            Chart::Isothermal => (da, db),
        }
    }

    pub fn grid(&self) -> &SurfaceGrid {
        self.grid
    }

    pub fn scheme(&self) -> FdScheme {
        self.scheme
    }

    pub fn jet(&self, i: usize, j: usize) -> &Jet {
        &self.jets[self.grid.index(i, j)]
    }

    pub fn jets(&self) -> &[Jet] {
        &self.jets
    }

    /// Measured quantities, `None` at degenerate nodes.
    pub fn fields(&self, i: usize, j: usize) -> Option<&NodeFields> {
        self.fields[self.grid.index(i, j)].as_ref()
    }

    fn require(&self, i: usize, j: usize) -> Result<&NodeFields> {
        self.fields(i, j).ok_or(Error::DegenerateMetric { i, j })
    }

    /// Non-degenerate nodes in row-major order.
    pub fn regular_nodes(&self) -> Vec<(usize, usize)> {
        self.grid
            .nodes()
            .filter(|&(i, j)| self.fields(i, j).is_some())
            .collect()
    }

    /// At least a half stencil away from every edge.
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        let w = self.scheme.half_width();
        i >= w && j >= w && i + w < self.grid.nu && j + w < self.grid.nv
    }

    pub fn fundamental_forms(&self, i: usize, j: usize) -> Result<FundamentalForms> {
        Ok(self.require(i, j)?.forms)
    }

    pub fn unit_normal(&self, i: usize, j: usize) -> Result<Vec3L> {
        Ok(self.require(i, j)?.normal)
    }

    pub fn mean_curvature(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.require(i, j)?.h)
    }

    pub fn mean_curvature_classical(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.require(i, j)?.h_classical)
    }

    pub fn hopf_differential(&self, i: usize, j: usize) -> Result<HopfPair> {
        Ok(self.require(i, j)?.hopf)
    }

    pub fn gaussian_curvature(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.require(i, j)?.k)
    }

    fn scalar_field(&self, pick: impl Fn(&NodeFields) -> f64) -> Vec<f64> {
        self.fields
            .iter()
            .map(|f| f.as_ref().map_or(f64::NAN, &pick))
            .collect()
    }

    fn gc_fields(&self) -> &[Vec<f64>; 4] {
        self.gc_fields.get_or_init(|| {
            [
                self.scalar_field(|f| f.forms.omega),
                self.scalar_field(|f| f.h),
                self.scalar_field(|f| f.hopf.q),
                self.scalar_field(|f| f.hopf.r),
            ]
        })
    }

    /// Residuals of
    ///
    /// ```text
    /// omega_uv + H^2 lambda / 2 - 2 Q R / lambda = 0
    /// H_u - 2 Q_v / lambda = 0
    /// H_v - 2 R_u / lambda = 0
    /// ```
    ///
    /// with every derivative a lattice difference of the measured fields. Nodes whose
    /// stencil touches a degenerate node report [`Error::DegenerateMetric`]; edge nodes
    /// without a centered stencil report [`Error::NotInterior`].
    pub fn gauss_codazzi_residual(&self, i: usize, j: usize) -> Result<[f64; 3]> {
        if !self.is_interior(i, j) {
            return Err(Error::NotInterior { i, j });
        }
        let fields = self.require(i, j)?;
        let [omega, h, q, r] = self.gc_fields();
        let lambda = fields.forms.lambda;
        let (_, _, omega_uv) = self.field_derivatives(omega, i, j);
        let (h_u, h_v, _) = self.field_derivatives(h, i, j);
        let (_, q_v, _) = self.field_derivatives(q, i, j);
        let (r_u, _, _) = self.field_derivatives(r, i, j);
        let (hh, qq, rr) = (fields.h, fields.hopf.q, fields.hopf.r);
        let res = [
            omega_uv + 0.5 * hh * hh * lambda - 2.0 * qq * rr / lambda,
            h_u - 2.0 * q_v / lambda,
            h_v - 2.0 * r_u / lambda,
        ];
        if res.iter().all(|x| x.is_finite()) {
            Ok(res)
        } else {
            Err(Error::DegenerateMetric { i, j })
        }
    }

    /// Gauss-Codazzi residuals at every node, `None` at edge and degenerate nodes.
    pub fn gauss_codazzi_all(&self) -> Vec<Option<[f64; 3]>> {
        let nodes: Vec<(usize, usize)> = self.grid.nodes().collect();
        nodes
            .par_iter()
            .map(|&(i, j)| self.gauss_codazzi_residual(i, j).ok())
            .collect()
    }

    /// Stereographic image `(q, r)` of the measured normal.
    pub fn projected_gauss_map(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        project_gauss_map(self.unit_normal(i, j)?)
    }
}

/// Largest lattice mixed difference `|phi_uv|` (component maximum) over the grid.
pub fn max_mixed_derivative(grid: &SurfaceGrid, scheme: FdScheme) -> Result<f64> {
    let an = Analyzer::from_points(grid, scheme)?;
    Ok(an
        .jets()
        .iter()
        .map(|j| j.puv.max_abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Domain;
    use crate::weierstrass::{integrate_surface, WeierstrassData};

    fn plane() -> SurfaceGrid {
        let d = WeierstrassData::parse("0", "1", "0", "1").unwrap();
        integrate_surface(&d, Domain::square(1.0), 17, 17).unwrap()
    }

    #[test]
    fn plane_forms_and_normal() {
        let g = plane();
        for an in [
            Analyzer::new(&g, FdScheme::Central2).unwrap(),
            Analyzer::from_points(&g, FdScheme::Central2).unwrap(),
        ] {
            let ff = an.fundamental_forms(3, 5).unwrap();
            assert!((ff.e + 1.0).abs() < 1e-12);
            assert!((ff.g - 1.0).abs() < 1e-12);
            assert!(ff.f.abs() < 1e-12);
            assert!(ff.omega.abs() < 1e-12);
            let n = an.unit_normal(0, 16).unwrap();
            assert!((n - Vec3L::new(0.0, 0.0, -1.0)).max_abs() < 1e-12);
            assert!(an.mean_curvature(8, 8).unwrap().abs() < 1e-10);
            let hp = an.hopf_differential(2, 2).unwrap();
            assert!(hp.q.abs() < 1e-10 && hp.r.abs() < 1e-10);
        }
    }

    #[test]
    fn isothermal_chart_gives_the_same_plane() {
        // phi(x, y) = (x, -y, 0) is the plane above in (x, y) coordinates
        let g = SurfaceGrid::from_fn(Chart::Isothermal, Domain::square(1.0), 9, 9, |x, y| {
            Ok(Vec3L::new(x, -y, 0.0))
        })
        .unwrap();
        let an = Analyzer::new(&g, FdScheme::Central2).unwrap();
        let jet = an.jet(4, 4);
        assert!((jet.pu - Vec3L::new(0.5, -0.5, 0.0)).max_abs() < 1e-14);
        assert!((jet.pv - Vec3L::new(-0.5, -0.5, 0.0)).max_abs() < 1e-14);
        assert!((an.fundamental_forms(4, 4).unwrap().lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_nodes_are_reported() {
        let g = SurfaceGrid::from_fn(Chart::Null, Domain::square(1.0), 5, 5, |_, _| {
            Ok(Vec3L::zero())
        })
        .unwrap();
        let an = Analyzer::new(&g, FdScheme::Central2).unwrap();
        assert_eq!(
            an.mean_curvature(1, 1).unwrap_err(),
            Error::DegenerateMetric { i: 1, j: 1 }
        );
        assert!(an.regular_nodes().is_empty());
    }

    #[test]
    fn too_small_grids_are_rejected() {
        let g = SurfaceGrid::from_fn(Chart::Null, Domain::square(1.0), 3, 9, |_, _| {
            Ok(Vec3L::zero())
        })
        .unwrap();
        assert!(Analyzer::new(&g, FdScheme::Central2).is_err());
    }
}
