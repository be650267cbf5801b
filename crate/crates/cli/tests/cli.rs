use std::path::Path;
use std::process::{Command, Output};

fn lw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn vertices(obj: &str) -> Vec<[f64; 3]> {
    obj.lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let v: Vec<f64> = l.split(' ').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// CSV table -> header and rows of numbers.
fn table(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn generate_default_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.obj");
    let o = lw(&["generate", "--gallery", "enneper_plus", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(vertices(&text).len(), 129 * 129);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2 * 128 * 128);
    assert!(text.starts_with("# timelike surface in E^3_1, signature (-,+,+)"));
    assert!(dir.path().join("e.meta.json").exists());
}

#[test]
fn custom_data_matches_gallery_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    let b = dir.path().join("b.obj");
    assert!(lw(&["generate", "--gallery", "enneper_plus", "--out", path_str(&a)]).status.success());
    let o = lw(&[
        "generate", "--q", "u", "--f", "1", "--r", "v", "--g", "1", "--domain", "-0.8", "0.8",
        "-0.8", "0.8", "--out", path_str(&b),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        vertices(&std::fs::read_to_string(&a).unwrap()),
        vertices(&std::fs::read_to_string(&b).unwrap())
    );
}

#[test]
fn bad_expression_cites_offset() {
    let o = lw(&["generate", "--q", "2*(u", "--f", "1", "--r", "v", "--g", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("byte 4"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["generate"][..],
        &["generate", "--gallery", "torus"],
        &["generate", "--gallery", "plane", "--q", "u"],
        &["generate", "--gallery", "plane", "--nu", "1"],
        &["generate", "--gallery", "plane", "--domain", "1", "0", "0", "1"],
        &["frobnicate"],
    ] {
        let o = lw(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with("error:"), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn analyze_enneper_origin() {
    let o = lw(&["analyze", "--gallery", "enneper_plus", "--at", "0,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][column(&h, "K")] + 4.0).abs() < 1e-5);
    assert!((rows[0][column(&h, "Q")] - 1.0).abs() < 1e-6);
}

#[test]
fn analyze_pseudosphere_and_plane() {
    let o = lw(&["analyze", "--gallery", "pseudosphere", "--grid", "--nu", "33", "--nv", "33"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 33 * 33);
    let col = column(&h, "H");
    assert!(rows.iter().all(|r| (r[col] - 1.0).abs() < 1e-4));

    let o = lw(&["analyze", "--gallery", "plane", "--nu", "17", "--nv", "17"]);
    let (h, rows) = table(&stdout(&o));
    for name in ["H", "K", "Q", "R"] {
        let c = column(&h, name);
        assert!(rows.iter().all(|r| r[c].abs() <= 1e-10), "{name}");
    }
}

#[test]
fn analyze_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = lw(&[
        "analyze", "--gallery", "enneper_minus", "--at", "0,0", "--at", "0.5,-0.5", "--format",
        "json", "--report", path_str(&report),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["K"].as_f64().unwrap() - 4.0).abs() < 1e-5);
    assert_eq!(rows[1]["u"].as_f64().unwrap(), 0.5);
}

#[test]
fn verify_catenoid_passes() {
    let o = lw(&["verify", "--gallery", "catenoid_spacelike"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS") || l.contains("[not applicable")), "{out}");
}

#[test]
fn verify_pseudosphere_tags_suites() {
    let o = lw(&["verify", "--gallery", "pseudosphere"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    let line = |suite: &str| {
        out.lines()
            .find(|l| l.split_whitespace().nth(1) == Some(&format!("{suite}:")))
            .unwrap()
            .to_owned()
    };
    assert!(line("minimality").starts_with("FAIL"));
    assert!(line("minimality").contains("not applicable"));
    assert!(line("umbilicity").starts_with("PASS"));
}

#[test]
fn verify_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    std::fs::write(&cfg, r#"{"gallery": "enneper_plus", "tolerances": {"minimality": -1}}"#).unwrap();
    let o = lw(&["verify", "--config", path_str(&cfg), "--nu", "33", "--nv", "33"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn verify_rejects_wrong_variable() {
    let o = lw(&["verify", "--q", "u", "--f", "1", "--r", "u", "--g", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r must depend on v only"));
}

#[test]
fn conjugate_catenoid_is_helicoid() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("conj.obj");
    let b = dir.path().join("hel.obj");
    let o = lw(&["conjugate", "--gallery", "catenoid_spacelike", "--out", path_str(&a)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(lw(&["generate", "--gallery", "helicoid_spacelike", "--out", path_str(&b)]).status.success());
    let x = vertices(&std::fs::read_to_string(a).unwrap());
    let y = vertices(&std::fs::read_to_string(b).unwrap());
    let worst = x
        .iter()
        .zip(&y)
        .flat_map(|(p, q)| (0..3).map(move |k| (p[k] - q[k]).abs()))
        .fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn plane_action() {
    let o = lw(&["worldsheet", "action", "--gallery", "plane", "--T", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "-1.0");
}

#[test]
fn worldsheet_measures() {
    let o = lw(&["worldsheet", "wave", "--gallery", "enneper_plus", "--nu", "65", "--nv", "65"]);
    let wave: f64 = stdout(&o).trim().parse().unwrap();
    assert!(wave < 1e-6);
    let o = lw(&["worldsheet", "wave", "--gallery", "pseudosphere", "--nu", "65", "--nv", "65"]);
    let wave: f64 = stdout(&o).trim().parse().unwrap();
    assert!(wave > 0.1);
    let o = lw(&["worldsheet", "el", "--gallery", "catenoid_timelike", "--nu", "65", "--nv", "65"]);
    let el: f64 = stdout(&o).trim().parse().unwrap();
    assert!(el < 1e-3);
    let o = lw(&["worldsheet", "eh", "--gallery", "enneper_plus", "--T", "1"]);
    let eh: f64 = stdout(&o).trim().parse().unwrap();
    // T = 1 gives alpha' = 1 / (2 pi), so EH = int K dA = -4 ln((1 + a^2) / (1 - a^2))
    let expect = -4.0 * ((1.0 + 0.64f64) / (1.0 - 0.64)).ln();
    assert!((eh - expect).abs() < 1e-6 * expect.abs(), "{eh} vs {expect}");
}

#[test]
fn evolve_straight_string() {
    let dir = tempfile::tempdir().unwrap();
    let init = dir.path().join("straight.json");
    std::fs::write(
        &init,
        r#"{"position": ["0", "s", "0"], "velocity": ["1", "0", "0"], "sigma": [0, 1], "samples": 9, "tension": 1}"#,
    )
    .unwrap();
    let out = dir.path().join("sheet.csv");
    let o = lw(&[
        "worldsheet", "evolve", "--init", path_str(&init), "--tau-max", "2", "--n-tau", "5",
        "--out", path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&std::fs::read_to_string(out).unwrap());
    assert_eq!(rows.len(), 45);
    let (u, v, x1, x2, x3) = (
        column(&h, "u"),
        column(&h, "v"),
        column(&h, "x1"),
        column(&h, "x2"),
        column(&h, "x3"),
    );
    for r in rows {
        // tau = (u - v) / 2, sigma = (u + v) / 2
        assert!((r[x1] - 0.5 * (r[u] - r[v])).abs() < 1e-12);
        assert!((r[x2] - 0.5 * (r[u] + r[v])).abs() < 1e-12);
        assert_eq!(r[x3], 0.0);
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    let out = dir.path().join("c.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"q": "u", "f": "1", "r": "v", "g": "1", "domain": [-0.5, 0.5, -0.5, 0.5], "nu": 5, "nv": 7, "out": "{}"}}"#,
            out.display()
        ),
    )
    .unwrap();
    let o = lw(&["generate", "--config", path_str(&cfg), "--nv", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(h, ["u", "v", "x1", "x2", "x3", "flag"]);
    assert_eq!(rows.len(), 15);
    assert_eq!(rows[0][0], -0.5);

    std::fs::write(&cfg, r#"{"gallery": "plane", "bogus": 1}"#).unwrap();
    let o = lw(&["generate", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_lw"))
            .args(["generate", "--gallery", "catenoid_timelike", "--nu", "33", "--nv", "33", "--format", "csv"])
            .env("LW_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn gallery_listing() {
    let o = lw(&["gallery"]);
    let names: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(names.len(), 8);
    assert!(names.contains(&"catenoid_timelike".to_owned()));
    let o = lw(&["gallery", "enneper_minus"]);
    assert!(stdout(&o).contains("q: (-u)"), "{}", stdout(&o));
}
