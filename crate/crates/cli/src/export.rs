//! Mesh and table writers. Output depends only on the grid, never on timing or threads.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use lw_core::{Chart, SurfaceGrid};

use crate::config::Format;
use crate::CliError;

/// Rounds to 12 significant digits and prints the shortest form of the result.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn chart_name(c: Chart) -> &'static str {
    match c {
        Chart::Null => "null",
        Chart::Isothermal => "isothermal",
    }
}

pub fn obj(g: &SurfaceGrid) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# timelike surface in E^3_1, signature (-,+,+), columns x1 x2 x3 (x1 timelike)");
    let _ = writeln!(
        s,
        "# grid {} x {} row-major, chart {}, domain {} {} {} {}",
        g.nu,
        g.nv,
        chart_name(g.chart),
        g.domain.u0,
        g.domain.u1,
        g.domain.v0,
        g.domain.v1
    );
    for p in &g.points {
        let _ = writeln!(s, "v {} {} {}", p.x1, p.x2, p.x3);
    }
    for (k, _) in g.degenerate.iter().enumerate().filter(|(_, d)| **d) {
        let _ = writeln!(s, "# degenerate {}", k + 1);
    }
    for i in 0..g.nu - 1 {
        for j in 0..g.nv - 1 {
            let a = i * g.nv + j + 1;
            let b = a + g.nv;
            let _ = writeln!(s, "f {} {} {}", a, b, b + 1);
            let _ = writeln!(s, "f {} {} {}", a, b + 1, a + 1);
        }
    }
    s
}

pub fn csv(g: &SurfaceGrid) -> String {
    let mut s = String::from("u,v,x1,x2,x3,flag\n");
    for (i, j) in g.nodes() {
        let (u, v) = g.null_coords(i, j);
        let p = g.point(i, j);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            u,
            v,
            p.x1,
            p.x2,
            p.x3,
            u8::from(g.is_degenerate(i, j))
        );
    }
    s
}

#[derive(Serialize)]
struct JsonMesh<'a> {
    chart: &'static str,
    nu: usize,
    nv: usize,
    domain: [f64; 4],
    points: Vec<[f64; 3]>,
    degenerate: &'a [bool],
}

pub fn json(g: &SurfaceGrid) -> String {
    let mesh = JsonMesh {
        chart: chart_name(g.chart),
        nu: g.nu,
        nv: g.nv,
        domain: [g.domain.u0, g.domain.u1, g.domain.v0, g.domain.v1],
        points: g.points.iter().map(|p| [p.x1, p.x2, p.x3]).collect(),
        degenerate: &g.degenerate,
    };
    serde_json::to_string_pretty(&mesh).expect("mesh serializes") + "\n"
}

/// Format from the flag, else from the file extension, else OBJ.
pub fn pick_format(flag: Option<Format>, path: Option<&Path>) -> Format {
    flag.unwrap_or_else(|| {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => Format::Obj,
        }
    })
}

pub fn mesh(g: &SurfaceGrid, format: Format) -> String {
    match format {
        Format::Obj => obj(g),
        Format::Csv => csv(g),
        Format::Json => json(g),
    }
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

#[derive(Serialize)]
pub struct Metadata<'a> {
    pub source: &'a str,
    pub chart: &'static str,
    pub nu: usize,
    pub nv: usize,
    pub domain: [f64; 4],
    pub degenerate_nodes: usize,
}

pub fn metadata(label: &str, g: &SurfaceGrid) -> String {
    let m = Metadata {
        source: label,
        chart: chart_name(g.chart),
        nu: g.nu,
        nv: g.nv,
        domain: [g.domain.u0, g.domain.u1, g.domain.v0, g.domain.v1],
        degenerate_nodes: g.degenerate.iter().filter(|d| **d).count(),
    };
    serde_json::to_string_pretty(&m).expect("metadata serializes") + "\n"
}
