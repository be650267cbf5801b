//! Verification suites run by `lw verify`.
//!
//! Every suite is tagged with whether it applies to the surface at hand. Suites that do
//! not apply still run and are reported, but never affect the exit code.

use serde::Serialize;

use lw_core::geometry::{gmap_pde_residual, max_mixed_derivative, umbilic_points, Analyzer};
use lw_core::weierstrass::{data_from_tangents, tangents};
use lw_core::SurfaceGrid;

use crate::config::JobConfig;
use crate::export::sig12;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub quantity: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub applicable: bool,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{tag} {}: {} = {} (tol {})",
            self.suite,
            self.quantity,
            sig12(self.measured),
            sig12(self.tolerance)
        );
        if !self.applicable {
            s.push_str(" [not applicable to this surface]");
        }
        s
    }

    /// Counts toward the exit code.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }
}

struct Ctx<'a> {
    job: &'a JobConfig,
    grid: &'a SurfaceGrid,
    an: Analyzer<'a>,
    out: Vec<SuiteResult>,
}

impl Ctx<'_> {
    fn push(&mut self, suite: &'static str, quantity: &'static str, measured: f64, default_tol: f64, applicable: bool) {
        let tolerance = self.job.tolerance(suite, default_tol);
        self.out.push(SuiteResult {
            suite,
            quantity,
            measured,
            tolerance,
            pass: measured <= tolerance,
            applicable,
        });
    }

    fn tangent(&self, i: usize, j: usize) -> Result<(lw_core::Vec3L, lw_core::Vec3L), CliError> {
        let t = self.grid.tangents.as_ref().expect("generated grids carry tangents");
        let (u, v) = self.grid.null_coords(i, j);
        Ok(t(u, v)?)
    }
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, f64::max)
}

fn variance(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64
}

pub fn run(job: &JobConfig) -> Result<Vec<SuiteResult>, CliError> {
    let grid = job.build()?;
    let an = Analyzer::new(&grid, job.scheme)?;
    let minimal = job.gallery().map_or(true, |e| e.is_minimal());
    let mut c = Ctx {
        job,
        grid: &grid,
        an,
        out: Vec::new(),
    };
    let regular = c.an.regular_nodes();

    // conformality
    let mut conf = 0.0f64;
    for (i, j) in grid.nodes() {
        let (pu, pv) = c.tangent(i, j)?;
        conf = conf
            .max(pu.inner(pu).abs() / pu.max_abs().powi(2).max(1.0))
            .max(pv.inner(pv).abs() / pv.max_abs().powi(2).max(1.0));
    }
    c.push("conformality", "max |<phi_u,phi_u>|, |<phi_v,phi_v>|", conf, 1e-10, true);

    // metric identity
    if job.data().is_some() || job.gallery().is_some() {
        let mut worst = 0.0f64;
        for &(i, j) in &regular {
            let (u, v) = grid.null_coords(i, j);
            let (pu, pv) = c.tangent(i, j)?;
            let measured = 2.0 * pu.inner(pv);
            if let Some(d) = job.data() {
                let s = 1.0 + d.q.eval(u)? * d.r.eval(v)?;
                let formula = s * s * d.f.eval(u)? * d.g.eval(v)?;
                worst = worst.max(((measured - formula) / formula).abs());
            }
            if let Some(e) = job.gallery() {
                let oracle = (e.metric)(u, v);
                worst = worst.max(((measured - oracle) / oracle).abs());
            }
        }
        c.push("metric", "max relative error of 2<phi_u,phi_v>", worst, 1e-9, true);
    }

    // unit normal
    let mut normal = 0.0f64;
    for &(i, j) in &regular {
        let n = c.an.unit_normal(i, j)?;
        let jet = c.an.jet(i, j);
        let scale = jet.pu.max_abs().max(jet.pv.max_abs()).max(1.0);
        normal = normal
            .max((n.inner(n) - 1.0).abs())
            .max(n.inner(jet.pu).abs() / scale)
            .max(n.inner(jet.pv).abs() / scale);
    }
    c.push("normal", "max |<N,N> - 1|, |<N,phi_u>|, |<N,phi_v>|", normal, 1e-10, true);

    // mean curvature
    let h_max = max_of(regular.iter().map(|&(i, j)| c.an.mean_curvature(i, j).unwrap().abs()));
    c.push("minimality", "max |H|", h_max, 1e-6, minimal);
    let uv = max_mixed_derivative(&grid, job.scheme)?;
    c.push("mixed-derivative", "max |phi_uv|", uv, 1e-7, minimal);
    if let Some(e) = job.gallery() {
        let h0 = e.mean_curvature;
        let dev = max_of(regular.iter().map(|&(i, j)| (c.an.mean_curvature(i, j).unwrap() - h0).abs()));
        c.push("mean-curvature", "max |H - H0|", dev, 1e-4, !minimal);
    }

    // Lorentz holomorphy of the Hopf differential
    let (nu, nv) = (grid.nu, grid.nv);
    let mut var = 0.0f64;
    let hopf = |i: usize, j: usize| c.an.fields(i, j).map(|f| f.hopf);
    for i in 0..nu {
        let qs: Vec<f64> = (0..nv).filter_map(|j| hopf(i, j)).map(|h| h.q).collect();
        if qs.len() > 1 {
            var = var.max(variance(&qs));
        }
    }
    for j in 0..nv {
        let rs: Vec<f64> = (0..nu).filter_map(|i| hopf(i, j)).map(|h| h.r).collect();
        if rs.len() > 1 {
            var = var.max(variance(&rs));
        }
    }
    c.push("holomorphy", "max row variance of Q, column variance of R", var, 1e-10, true);

    // umbilicity
    let umbilic = umbilic_points(&c.an, 1e-4);
    let missing = grid
        .nodes()
        .filter(|&(i, j)| c.an.is_interior(i, j) && !umbilic.contains(&(i, j)))
        .count();
    c.push("umbilicity", "interior nodes with max(|Q|,|R|) >= 1e-4", missing as f64, 0.0, !minimal);

    // Gauss-Codazzi
    let gc = max_of(
        c.an.gauss_codazzi_all()
            .into_iter()
            .flatten()
            .flat_map(|r| r.into_iter().map(f64::abs)),
    );
    c.push("gauss-codazzi", "max residual", gc, 1e-4, true);

    if let Some(d) = job.data() {
        let mut worst = 0.0f64;
        for &(i, j) in &regular {
            let h = c.an.mean_curvature(i, j)?;
            let r = gmap_pde_residual(d, h, &c.an, i, j)?;
            worst = worst.max(max_of(r.iter().map(|x| x.abs())));
        }
        c.push("gauss-map-pdes", "max residual", worst, 1e-4, true);

        let mut rt = 0.0f64;
        for (i, j) in grid.nodes() {
            let (u, v) = grid.null_coords(i, j);
            let (pu, pv) = tangents(d, u, v)?;
            let got = data_from_tangents(pu, pv, u, v)?;
            let want = (d.q.eval(u)?, d.f.eval(u)?, d.r.eval(v)?, d.g.eval(v)?);
            for (a, b) in [(got.0, want.0), (got.1, want.1), (got.2, want.2), (got.3, want.3)] {
                rt = rt.max((a - b).abs() / b.abs().max(1.0));
            }
        }
        c.push("round-trip", "max relative error of extracted (q,f,r,g)", rt, 1e-10, true);
    }

    if let Some(e) = job.gallery() {
        let (u0, v0) = grid.null_coords(0, 0);
        if let Some(base) = e.closed_point(u0, v0) {
            let err = max_of(grid.nodes().map(|(i, j)| {
                let (u, v) = grid.null_coords(i, j);
                (grid.point(i, j) - (e.closed_point(u, v).unwrap() - base)).max_abs()
            }));
            c.push("closed-form", "max node error", err, 1e-8, true);
        }
        let mut k_err = 0.0f64;
        let mut hopf_err = 0.0f64;
        for &(i, j) in &regular {
            let (u, v) = grid.null_coords(i, j);
            let f = c.an.fields(i, j).unwrap();
            if (e.metric)(u, v).abs() > 0.04 {
                let k = (e.gaussian_curvature)(u, v);
                k_err = k_err.max(((f.k - k) / k.abs().max(1e-12)).abs());
            }
            hopf_err = hopf_err
                .max((f.hopf.q - e.hopf.0).abs())
                .max((f.hopf.r - e.hopf.1).abs());
        }
        c.push("curvature", "max relative error of K", k_err, 1e-5, true);
        c.push("hopf", "max |(Q,R) - oracle|", hopf_err, 1e-6, true);
    }
    Ok(c.out)
}
