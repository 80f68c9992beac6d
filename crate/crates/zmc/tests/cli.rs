//! End-to-end runs of the `zmc` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zmc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmc"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZMC_DEFAULT_TOL")
        .output()
        .expect("spawn zmc")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// `(vertices, faces)` of a v/f text mesh.
fn read_mesh(path: &Path) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let text = fs::read_to_string(path).unwrap();
    let mut v = Vec::new();
    let mut f = Vec::new();
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let x: Vec<f64> = it.map(|s| s.parse().unwrap()).collect();
                v.push([x[0], x[1], x[2]]);
            }
            Some("f") => {
                let x: Vec<usize> = it.map(|s| s.parse().unwrap()).collect();
                f.push([x[0], x[1], x[2]]);
            }
            _ => {}
        }
    }
    (v, f)
}

#[test]
fn verify_enneper_graph_and_not_graph() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&zmc(&["verify", "enneper", "--n", "3", "--c", "1", "--lambda", "1"], dir.path()));
    assert_eq!(r["verdict"], "univalent");
    assert_eq!(r["imageClass"], "starlike_not_convex");
    assert_eq!(r["jacobianSign"], "positive");
    assert_eq!(r["boundarySimple"], true);
    assert_eq!(r["supAbsDilatation"], 1.0);
    for key in ["jacobianCensus", "witnesses", "params", "resolution", "tolerance", "starlikeCenter"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }

    let r = json(&zmc(&["verify", "enneper", "--n", "3", "--c", "1", "--lambda", "2"], dir.path()));
    assert_eq!(r["verdict"], "not_univalent");
    assert_eq!(r["supAbsDilatation"], 4.0);
}

#[test]
fn verify_scherk_minimal_graph_is_convex() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&zmc(&["verify", "scherk", "--c", "1"], dir.path()));
    assert_eq!(r["verdict"], "univalent");
    assert_eq!(r["imageClass"], "convex");
    // The isotropic member is a graph too, but over a non-convex domain.
    let r = json(&zmc(&["verify", "scherk", "--c", "0"], dir.path()));
    assert_eq!(r["verdict"], "univalent");
    assert_eq!(r["imageClass"], "starlike_not_convex");
}

#[test]
fn surface_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let out = zmc(
        &["surface", "enneper", "--n", "3", "--theta", "0", "--lambda", "1", "--c", "0", "--grid", "12", "--spokes", "32", "--out", "e.obj"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (v, f) = read_mesh(&dir.path().join("e.obj"));
    assert_eq!(v.len(), 1 + 12 * 32);
    assert!(f.iter().flatten().all(|&k| k >= 1 && k <= v.len()));
    // c = 0: the horizontal part is exactly h(w) = w on the polar grid.
    let r = (v[1][0] * v[1][0] + v[1][1] * v[1][1]).sqrt();
    assert_eq!(r, 1.0 / 12.0);
    assert!(dir.path().join("e.obj.singular").exists());
    let text = fs::read_to_string(dir.path().join("e.obj")).unwrap();
    for key in ["# data: enneper(n=3)", "# theta: 0", "# lambda: 1", "# c: 0", "# grid: polar 12 rings x 32 spokes", "# tolerance:"] {
        assert!(text.contains(key), "header lacks {key}");
    }

    let out = zmc(&["surface", "scherk", "--theta", "0", "--lambda", "1", "--c", "-1", "--grid", "16", "--spokes", "48", "--out", "s.obj"], dir.path());
    assert_eq!(code(&out), 0);
    let (v, _) = read_mesh(&dir.path().join("s.obj"));
    assert!(v.iter().flatten().all(|x| x.is_finite()));

    let out = zmc(&["surface", "exponential", "--n", "2", "--grid", "10"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 11 * 11);
}

#[test]
fn lorentzian_surface_flags_singular_circle() {
    let dir = tempfile::tempdir().unwrap();
    // |G| = |w|, cλ² = -4: singular where |w| = 1/2.
    let out = zmc(&["surface", "enneper", "--n", "1", "--c", "-4", "--grid", "20", "--spokes", "40", "--out", "m.obj"], dir.path());
    assert_eq!(code(&out), 0);
    let side = fs::read_to_string(dir.path().join("m.obj.singular")).unwrap();
    let flagged: Vec<usize> = side
        .lines()
        .filter_map(|l| l.strip_prefix("s "))
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(!flagged.is_empty());
    assert!(side.lines().any(|l| l.starts_with("w ")));
}

#[test]
fn region_reproduces_enneper_intervals_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["region", "enneper", "--n", "3", "--theta-samples", "3", "--rho-samples", "5", "--resolution", "96"];
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", "a"]);
    assert_eq!(code(&zmc(&a, dir.path())), 0);
    let mut b: Vec<&str> = args.to_vec();
    b.extend(["--out", "b"]);
    assert_eq!(code(&zmc(&b, dir.path())), 0);
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.json"), read("b.json"));

    let csv = String::from_utf8(read("a.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,rho,c_sign,certificate,oracle"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 5 * 2);
    for r in &rows {
        let rho: f64 = r[1].parse().unwrap();
        let expect = if rho <= 1.0 { "graph:isotropic-convex" } else { "nongraph" };
        assert_eq!(r[3], expect, "rho = {rho}");
    }
    let j: Value = serde_json::from_slice(&read("a.json")).unwrap();
    assert_eq!(j["certificates"][0]["interval"]["text"], "[0, 1]");
    assert_eq!(j["nongraph"]["interval"]["text"], "(1, inf)");
    assert_eq!(j["sweep"]["contradictions"], 0);
    assert_eq!(j["consistent"], true);
}

#[test]
fn region_scherk_and_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let out = zmc(&["region", "scherk", "--no-oracle", "--rho-samples", "3", "--theta-samples", "1", "--out", "s"], dir.path());
    assert_eq!(code(&out), 0);
    let j: Value = serde_json::from_slice(&fs::read(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(j["certificates"][0]["theorem"], "graph:krust-seeded");
    assert_eq!(j["certificates"][0]["interval"]["text"], "[0, 1]");
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",skipped")));

    let out = zmc(
        &["region", "exponential", "--n", "2", "--truncation", "6", "--no-oracle", "--rho-samples", "2", "--theta-samples", "1", "--out", "x"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let j: Value = serde_json::from_slice(&fs::read(dir.path().join("x.json")).unwrap()).unwrap();
    let cert = &j["certificates"][0];
    assert_eq!(cert["interval"]["lo"], 0.0);
    let hi = cert["interval"]["hi"].as_f64().unwrap();
    assert!((1.0..1.01).contains(&hi), "{hi}");
    assert_eq!(j["norms"]["truncated"], true);
    let notes: Vec<&str> = cert["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.iter().any(|n| n.contains("truncated")));
}

#[test]
fn injected_false_certificate_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = zmc(
        &["region", "enneper", "--n", "3", "--theta-samples", "1", "--rho-samples", "3", "--resolution", "96", "--inject-false-certificate", "--out", "r"],
        dir.path(),
    );
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    // Files are still written for inspection.
    assert!(dir.path().join("r.csv").exists());
}

#[test]
fn family_sweeps_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = zmc(
        &["family", "enneper", "--sweep", "c", "--from", "-1", "--to", "1", "--steps", "9", "--grid", "8", "--spokes", "24", "--out-dir", "fc"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value = serde_json::from_slice(&fs::read(dir.path().join("fc/manifest.json")).unwrap()).unwrap();
    let frames = m["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 9);
    assert_eq!(frames[4]["params"]["c"], 0.0);
    assert_eq!(m["invariant"]["holds"], true);
    for f in frames {
        assert!(dir.path().join("fc").join(f["file"].as_str().unwrap()).exists());
    }

    let out = zmc(&["family", "scherk", "--sweep", "theta", "--steps", "8", "--grid", "8", "--spokes", "24", "--out-dir", "ft"], dir.path());
    assert_eq!(code(&out), 0);
    let m: Value = serde_json::from_slice(&fs::read(dir.path().join("ft/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["frames"].as_array().unwrap().len(), 8);
    assert_eq!(m["invariant"]["name"], "metricInvariance");
    assert_eq!(m["invariant"]["holds"], true);

    let out = zmc(
        &["family", "enneper", "--sweep", "lambda", "--from", "0.6", "--to", "2.0", "--steps", "3", "--grid", "8", "--spokes", "24", "--out-dir", "fl"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let m: Value = serde_json::from_slice(&fs::read(dir.path().join("fl/manifest.json")).unwrap()).unwrap();
    let lambdas: Vec<f64> = m["frames"].as_array().unwrap().iter().map(|f| f["params"]["lambda"].as_f64().unwrap()).collect();
    assert_eq!(lambdas[0], 0.6);
    assert!((lambdas[1] - 1.3).abs() < 1e-15);
    assert_eq!(lambdas[2], 2.0);
}

#[test]
fn data_files_and_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e2.zmc"), "# Enneper, n = 2\nF = 1\nG = w^2\ndomain = disk 1\n").unwrap();
    let r = json(&zmc(&["verify", "e2.zmc", "--c", "1", "--resolution", "96"], dir.path()));
    assert_eq!(r["verdict"], "univalent");
    assert_eq!(r["data"], "file:e2.zmc");

    fs::write(dir.path().join("cfg"), "lambda = 2\nresolution = 96\ntol = 1e-9\n").unwrap();
    let r = json(&zmc(&["--config", "cfg", "verify", "e2.zmc", "--c", "1"], dir.path()));
    assert_eq!(r["verdict"], "not_univalent");
    assert_eq!(r["resolution"], 96);
    assert_eq!(r["tolerance"], 1e-9);
    let settings = r["settings"].as_array().unwrap();
    let origin = |k: &str| settings.iter().find(|s| s["key"] == k).unwrap()["origin"].clone();
    assert_eq!(origin("lambda"), "config");
    assert_eq!(origin("c"), "cli");
    assert_eq!(origin("theta"), "default");

    // Flags beat the config file.
    let r = json(&zmc(&["--config", "cfg", "verify", "e2.zmc", "--c", "1", "--lambda", "1"], dir.path()));
    assert_eq!(r["verdict"], "univalent");

    // The environment sits below the config file.
    let out = Command::new(env!("CARGO_BIN_EXE_zmc"))
        .args(["verify", "e2.zmc", "--resolution", "96"])
        .current_dir(dir.path())
        .env("ZMC_DEFAULT_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["tolerance"], 1e-7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.zmc"), "F = 1\nG = w^0.5\ndomain = disk 1\n").unwrap();
    assert_eq!(code(&zmc(&["verify", "bad.zmc"], dir.path())), 2);
    fs::write(dir.path().join("pole.zmc"), "F = 1/w\nG = w\ndomain = disk 1\n").unwrap();
    assert_eq!(code(&zmc(&["verify", "pole.zmc"], dir.path())), 2);
    assert_eq!(code(&zmc(&["verify", "enneper", "--theta", "x"], dir.path())), 2);
    assert_eq!(code(&zmc(&["verify", "enneper", "--resolution", "8"], dir.path())), 2);
    assert_eq!(code(&zmc(&["frobnicate"], dir.path())), 2);
    assert_eq!(code(&zmc(&["examples"], dir.path())), 0);
}

#[test]
fn examples_lists_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = zmc(&["examples", "--json"], dir.path());
    let list = json(&out);
    let names: Vec<&str> = list.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["enneper(n=3)", "exponential(n=2)", "scherk"]);
}
