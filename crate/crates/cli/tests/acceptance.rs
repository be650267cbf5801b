//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p lw-cli --test acceptance -- --nocapture` to see the report.

use std::f64::consts::PI;
use std::process::Command;

use lw_core::gallery::{self, GalleryEntry};
use lw_core::geometry::{
    coordinate_frame, frame_tangents, gmap_pde_residual, integrate_lax_frame, max_mixed_derivative,
    umbilic_points, Analyzer, LaxPath,
};
use lw_core::weierstrass::{
    conjugate, data_from_tangents, dirac_residual, extract_data, integrate_surface,
    spinors_from_data, surface_from_spinors, tangents, NullCurvePair,
};
use lw_core::worldsheet::{
    einstein_hilbert_interior, euler_lagrange_residual, nambu_goto_action, wave_residual,
    DEFAULT_TENSION,
};
use lw_core::{Domain, FdScheme, SurfaceGrid};

const N: usize = 129;
const RICH: FdScheme = FdScheme::Richardson;

type Outcome = Result<String, String>;

fn entry(name: &str) -> GalleryEntry {
    gallery::get(name).unwrap()
}

fn minimal_names() -> Vec<&'static str> {
    gallery::list()
        .iter()
        .copied()
        .filter(|n| *n != "plane" && *n != "pseudosphere")
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

/// Largest distance to the closed form, both anchored at the lower-left corner.
fn closed_form_error(e: &GalleryEntry, g: &SurfaceGrid) -> f64 {
    let (u0, v0) = g.null_coords(0, 0);
    let base = e.closed_point(u0, v0).unwrap();
    g.nodes()
        .map(|(i, j)| {
            let (u, v) = g.null_coords(i, j);
            (g.point(i, j) - (e.closed_point(u, v).unwrap() - base)).max_abs()
        })
        .fold(0.0, f64::max)
}

fn c1_reproduction() -> Outcome {
    let domains = [
        ("enneper_plus", Domain::square(0.8)),
        ("enneper_minus", Domain::square(0.8)),
        ("catenoid_spacelike", Domain::square(1.0)),
        (
            "catenoid_timelike",
            Domain::new(PI / 2.0, 1.5 * PI, -PI / 2.0, PI / 2.0).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (name, dom) in domains {
        let e = entry(name);
        let g = e.build(dom, N, N).map_err(|e| e.to_string())?;
        worst = worst.max(closed_form_error(&e, &g));
        if let Some(partner) = name.strip_prefix("catenoid_") {
            let h = conjugate(&g).map_err(|e| e.to_string())?;
            worst = worst.max(closed_form_error(&entry(&format!("helicoid_{partner}")), &h));
        }
    }
    check(worst <= 1e-8, format!("max node error {}", sci(worst)))
}

fn c2_metric() -> Outcome {
    let mut worst = 0.0f64;
    for name in gallery::list() {
        let e = entry(name);
        let g = e.build_default(N, N).map_err(|e| e.to_string())?;
        let t = g.tangents.clone().unwrap();
        for (i, j) in g.nodes().filter(|&(i, j)| !g.is_degenerate(i, j)) {
            let (u, v) = g.null_coords(i, j);
            let (pu, pv) = t(u, v).unwrap();
            let measured = 2.0 * pu.inner(pv);
            let oracle = (e.metric)(u, v);
            let mut err = ((measured - oracle) / oracle).abs();
            if let Some(d) = e.data() {
                let (q, f, r, gg) = (
                    d.q.eval(u).unwrap(),
                    d.f.eval(u).unwrap(),
                    d.r.eval(v).unwrap(),
                    d.g.eval(v).unwrap(),
                );
                let formula = (1.0 + q * r).powi(2) * f * gg;
                err = err.max(((measured - formula) / formula).abs());
            }
            worst = worst.max(err);
        }
    }
    check(worst <= 1e-9, format!("max relative error {}", sci(worst)))
}

fn c3_minimality() -> Outcome {
    let (mut h_max, mut uv_max) = (0.0f64, 0.0f64);
    for name in minimal_names() {
        let g = entry(name).build_default(N, N).map_err(|e| e.to_string())?;
        let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
        for (i, j) in an.regular_nodes() {
            h_max = h_max.max(an.mean_curvature(i, j).unwrap().abs());
        }
        uv_max = uv_max.max(max_mixed_derivative(&g, RICH).map_err(|e| e.to_string())?);
    }
    check(
        h_max <= 1e-6 && uv_max <= 1e-7,
        format!("max |H| {}, max |phi_uv| {}", sci(h_max), sci(uv_max)),
    )
}

fn c4_curvature() -> Outcome {
    let mut center_err = 0.0f64;
    let mut rel = 0.0f64;
    for name in ["enneper_plus", "enneper_minus"] {
        let e = entry(name);
        let eps = e.epsilon.unwrap();
        let g = e.build_default(N, N).map_err(|e| e.to_string())?;
        let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
        let mid = (N - 1) / 2;
        assert_eq!(g.null_coords(mid, mid), (0.0, 0.0));
        center_err = center_err.max((an.gaussian_curvature(mid, mid).unwrap() + 4.0 * eps).abs());
        for (i, j) in an.regular_nodes() {
            let (u, v) = g.null_coords(i, j);
            if (1.0 + eps * u * v).abs() > 0.2 {
                let k = (e.gaussian_curvature)(u, v);
                rel = rel.max(((an.gaussian_curvature(i, j).unwrap() - k) / k).abs());
            }
        }
    }
    check(
        center_err <= 1e-5 && rel <= 1e-5,
        format!("K(0,0) error {}, max relative error {}", sci(center_err), sci(rel)),
    )
}

fn variance(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64
}

fn c5_hopf() -> Outcome {
    let (mut err, mut var) = (0.0f64, 0.0f64);
    for name in ["enneper_plus", "enneper_minus"] {
        let e = entry(name);
        let g = e.build_default(N, N).map_err(|e| e.to_string())?;
        let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
        let (q0, r0) = e.hopf;
        for (i, j) in g.nodes() {
            let h = an.hopf_differential(i, j).unwrap();
            err = err.max((h.q - q0).abs()).max((h.r - r0).abs());
        }
        for i in 0..N {
            var = var.max(variance((0..N).map(|j| an.hopf_differential(i, j).unwrap().q)));
        }
        for j in 0..N {
            var = var.max(variance((0..N).map(|i| an.hopf_differential(i, j).unwrap().r)));
        }
    }
    check(
        err <= 1e-6 && var <= 1e-10,
        format!("max |(Q,R) - (eps,1)| {}, max variance {}", sci(err), sci(var)),
    )
}

fn c6_pseudosphere() -> Outcome {
    let g = entry("pseudosphere").build_default(N, N).map_err(|e| e.to_string())?;
    let on_sphere = g
        .points
        .iter()
        .map(|p| (p.inner(*p) - 1.0).abs())
        .fold(0.0, f64::max);
    let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
    let (mut h_err, mut k_err) = (0.0f64, 0.0f64);
    for (i, j) in g.nodes() {
        h_err = h_err.max((an.mean_curvature(i, j).unwrap() - 1.0).abs());
        k_err = k_err.max((an.gaussian_curvature(i, j).unwrap() - 1.0).abs());
    }
    let umbilic = umbilic_points(&an, 1e-4);
    let missing = g
        .nodes()
        .filter(|&(i, j)| an.is_interior(i, j) && !umbilic.contains(&(i, j)))
        .count();
    check(
        on_sphere <= 1e-10 && h_err <= 1e-4 && k_err <= 1e-4 && missing == 0,
        format!(
            "|<phi,phi> - 1| {}, |H - 1| {}, |K - 1| {}, interior nodes not umbilic {missing}",
            sci(on_sphere),
            sci(h_err),
            sci(k_err)
        ),
    )
}

fn c7_gauss_map() -> Outcome {
    let g = entry("enneper_plus").build_default(N, N).map_err(|e| e.to_string())?;
    let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
    let (mut plus, mut minus) = (0.0f64, 0.0f64);
    for (i, j) in an.regular_nodes() {
        let (u, v) = g.null_coords(i, j);
        let (q, r) = an.projected_gauss_map(i, j).unwrap();
        plus = plus.max((q - u).abs().max((r - v).abs()));
        minus = minus.max((q + u).abs().max((r + v).abs()));
    }
    let enneper = plus.min(minus);
    let mut shared = 0.0f64;
    for name in ["catenoid_spacelike", "catenoid_timelike"] {
        let cat = entry(name).build_default(N, N).map_err(|e| e.to_string())?;
        let hel = conjugate(&cat).map_err(|e| e.to_string())?;
        let a = Analyzer::new(&cat, RICH).map_err(|e| e.to_string())?;
        let b = Analyzer::new(&hel, RICH).map_err(|e| e.to_string())?;
        for (i, j) in a.regular_nodes() {
            let (q1, r1) = a.projected_gauss_map(i, j).unwrap();
            let (q2, r2) = b.projected_gauss_map(i, j).unwrap();
            shared = shared.max((q1 - q2).abs().max((r1 - r2).abs()));
        }
    }
    check(
        enneper <= 1e-6 && shared <= 1e-6,
        format!(
            "enneper (q,r) vs (u,v) {}, catenoid vs helicoid {}",
            sci(enneper),
            sci(shared)
        ),
    )
}

fn c8_gauss_map_pdes() -> Outcome {
    let (mut symbolic, mut measured) = (0.0f64, 0.0f64);
    for name in minimal_names() {
        let e = entry(name);
        let g = e.build_default(N, N).map_err(|e| e.to_string())?;
        let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
        for (i, j) in an.regular_nodes() {
            let h = an.mean_curvature(i, j).unwrap();
            let r = gmap_pde_residual(e.data().unwrap(), h, &an, i, j).map_err(|e| e.to_string())?;
            symbolic = symbolic.max(r[1].abs()).max(r[2].abs());
            measured = measured.max(r[0].abs()).max(r[3].abs());
        }
    }
    check(
        symbolic <= 1e-6 && measured <= 1e-4,
        format!("q_v, r_u residual {}, q_u, r_v residual {}", sci(symbolic), sci(measured)),
    )
}

fn c9_spinors() -> Outcome {
    let e = entry("enneper_plus");
    let d = e.data().unwrap();
    let dom = e.default_domain;
    let sp = spinors_from_data(d, dom).map_err(|e| e.to_string())?;
    let from_spinors = surface_from_spinors(&sp, dom, N, N).map_err(|e| e.to_string())?;
    let direct = integrate_surface(d, dom, N, N).map_err(|e| e.to_string())?;
    let diff = from_spinors.max_difference(&direct);
    let dirac = dirac_residual(&sp, dom, 33).map_err(|e| e.to_string())?;
    check(
        diff <= 1e-8 && dirac <= 1e-8,
        format!("surface difference {}, Dirac residual {}", sci(diff), sci(dirac)),
    )
}

fn c10_gauss_codazzi() -> Outcome {
    let mut worst = 0.0f64;
    let mut plane = 0.0f64;
    for name in gallery::list() {
        let g = entry(name).build_default(N, N).map_err(|e| e.to_string())?;
        let an = Analyzer::new(&g, RICH).map_err(|e| e.to_string())?;
        let m = an
            .gauss_codazzi_all()
            .into_iter()
            .flatten()
            .flat_map(|r| r.into_iter().map(f64::abs))
            .fold(0.0, f64::max);
        if *name == "plane" {
            plane = m;
        } else {
            worst = worst.max(m);
        }
    }
    check(
        worst <= 1e-4 && plane <= 1e-10,
        format!("gallery max residual {}, plane {}", sci(worst), sci(plane)),
    )
}

fn c11_lax() -> Outcome {
    let e = entry("enneper_plus");
    let d = e.data().unwrap();
    let dom = Domain::square(0.5);
    let phi0 = coordinate_frame(
        d.tangent_u(dom.u0).map_err(|e| e.to_string())?,
        d.tangent_v(dom.v0).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let a = integrate_lax_frame(d, phi0, dom, N, N, LaxPath::UFirst).map_err(|e| e.to_string())?;
    let b = integrate_lax_frame(d, phi0, dom, N, N, LaxPath::VFirst).map_err(|e| e.to_string())?;
    let drift = a.max_det_drift().max(b.max_det_drift());
    let path = a.max_difference(&b);
    let us = dom.us(N);
    let vs = dom.vs(N);
    let mut recon = 0.0f64;
    for (i, &u) in us.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            let (pu, pv) = tangents(d, u, v).unwrap();
            let omega = (2.0 * pu.inner(pv)).ln();
            let (ru, rv) = frame_tangents(a.frame(i, j), omega).unwrap();
            recon = recon.max((ru - pu).max_abs()).max((rv - pv).max_abs());
        }
    }
    check(
        drift <= 1e-8 && recon <= 1e-6 && path <= 1e-6,
        format!(
            "det drift {}, tangent reconstruction {}, path difference {}",
            sci(drift),
            sci(recon),
            sci(path)
        ),
    )
}

fn c12_worldsheet() -> Outcome {
    let plane = entry("plane").build_default(N, N).map_err(|e| e.to_string())?;
    let plane_action = nambu_goto_action(&plane, 1.0, RICH).map_err(|e| e.to_string())?;

    let enneper = entry("enneper_plus");
    let g = enneper.build_default(N, N).map_err(|e| e.to_string())?;
    let a = enneper.default_domain.u1;
    // int (1 + u v)^2 / 2 du dv over [-a, a]^2
    let analytic = -DEFAULT_TENSION * (2.0 * a * a + 2.0 * a.powi(6) / 9.0);
    let action = nambu_goto_action(&g, DEFAULT_TENSION, RICH).map_err(|e| e.to_string())?;
    let action_rel = ((action - analytic) / analytic).abs();

    let mut wave_minimal = 0.0f64;
    for name in minimal_names() {
        let g = entry(name).build_default(N, N).map_err(|e| e.to_string())?;
        wave_minimal = wave_minimal.max(wave_residual(&g, RICH).map_err(|e| e.to_string())?);
    }
    let ps = entry("pseudosphere").build_default(N, N).map_err(|e| e.to_string())?;
    let wave_ps = wave_residual(&ps, RICH).map_err(|e| e.to_string())?;

    let coarse = enneper.build_default(65, 65).map_err(|e| e.to_string())?;
    let eh_fine = einstein_hilbert_interior(&g, 1.0, RICH).map_err(|e| e.to_string())?;
    let eh_coarse = einstein_hilbert_interior(&coarse, 1.0, RICH).map_err(|e| e.to_string())?;
    let eh_diff = (eh_fine.value - eh_coarse.value).abs();

    let el = euler_lagrange_residual(&g, DEFAULT_TENSION, RICH).map_err(|e| e.to_string())?;
    check(
        (plane_action + 1.0).abs() <= 1e-10
            && action_rel <= 1e-4
            && wave_minimal <= 1e-6
            && wave_ps >= 0.1
            && eh_diff <= 1e-3,
        format!(
            "plane action {:.12}, enneper action relative error {}, wave residual minimal {} / pseudosphere {:.3}, EH 65 vs 129 {}, EL residual {}",
            plane_action,
            sci(action_rel),
            sci(wave_minimal),
            wave_ps,
            sci(eh_diff),
            sci(el)
        ),
    )
}

fn c13_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for name in gallery::list() {
        let e = entry(name);
        let Some(d) = e.data() else { continue };
        let dom = e.default_domain;
        for (&u, &v) in dom.us(N).iter().zip(&dom.vs(N)) {
            let (pu, pv) = tangents(d, u, v).unwrap();
            let (q, f, r, g) = data_from_tangents(pu, pv, u, v).map_err(|e| e.to_string())?;
            let expect = [
                d.q.eval(u).unwrap(),
                d.f.eval(u).unwrap(),
                d.r.eval(v).unwrap(),
                d.g.eval(v).unwrap(),
            ];
            for (a, b) in [q, f, r, g].iter().zip(expect) {
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }
        let sampled = extract_data(&NullCurvePair::from_data(d), dom, N).map_err(|e| e.to_string())?;
        for (&u, &v) in dom.us(N).iter().zip(&dom.vs(N)) {
            let pairs = [
                (sampled.q.eval(u).unwrap(), d.q.eval(u).unwrap()),
                (sampled.f.eval(u).unwrap(), d.f.eval(u).unwrap()),
                (sampled.r.eval(v).unwrap(), d.r.eval(v).unwrap()),
                (sampled.g.eval(v).unwrap(), d.g.eval(v).unwrap()),
            ];
            for (a, b) in pairs {
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }
    }
    check(worst <= 1e-10, format!("max pointwise error {}", sci(worst)))
}

fn c14_cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.obj"));
        let status = Command::new(env!("CARGO_BIN_EXE_lw"))
            .args(["generate", "--gallery", "enneper_plus", "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("generate exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(
        outputs[0] == outputs[1] && !outputs[0].is_empty(),
        format!("{} bytes, identical: {}", outputs[0].len(), outputs[0] == outputs[1]),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("enneper and catenoid reproduction", c1_reproduction),
        ("metric identity", c2_metric),
        ("minimality", c3_minimality),
        ("gaussian curvature", c4_curvature),
        ("hopf differential", c5_hopf),
        ("pseudosphere", c6_pseudosphere),
        ("gauss map", c7_gauss_map),
        ("gauss map equations", c8_gauss_map_pdes),
        ("spinor route", c9_spinors),
        ("gauss-codazzi", c10_gauss_codazzi),
        ("lax frame", c11_lax),
        ("worldsheet", c12_worldsheet),
        ("round trip", c13_round_trip),
        ("cli determinism", c14_cli_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(k + 1);
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail}", k + 1);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

