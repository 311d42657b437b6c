use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fekete-dyn"))
        .args(args)
        .output()
        .expect("spawn fekete-dyn")
}

fn json(args: &[&str]) -> Value {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn julia_capacity_inline_and_from_file() {
    let v = json(&["capacity", "--poly", "0 1 0 2"]);
    assert!((v["capacity"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.txt", "0 0 3\n");
    for args in [
        ["capacity", "--poly", f.as_str()],
        ["capacity", "--poly-file", f.as_str()],
    ] {
        let v = json(&args);
        assert!((v["capacity"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn set_capacity_and_green() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "e.toml", "kind = \"interval\"\na = -2\nb = 2\n");
    let v = json(&["capacity", "--set", &set, "--n", "32"]);
    assert_eq!(v["capacity"].as_f64().unwrap(), 1.0);
    let v = json(&["green", "--set", &set, "--at", "0,1", "--at", "-1"]);
    let g: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["green"].as_f64().unwrap())
        .collect();
    assert!((g[0] - (0.5 + 1.25f64.sqrt()).ln()).abs() < 1e-12);
    assert_eq!(g[1], 0.0);
}

#[test]
fn klimek_record() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", "kind = \"disk\"\nr = 1\n");
    let b = write(dir.path(), "b.json", r#"{"set": {"kind": "disk", "r": 2}}"#);
    let v = json(&["klimek", "--set", &a, "--set", &b]);
    for key in ["gamma", "argmax_point", "side", "cap_gap"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["gamma"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
    assert!(!bin(&["klimek", "--set", &a]).status.success());
}

#[test]
fn heights() {
    let out = bin(&["height", "weil", "--alpha", "-3/2"]);
    assert!(out.status.success());
    let h: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((h - 3f64.ln()).abs() < 1e-15);

    let v = json(&["height", "weil", "--alpha", "12/7", "--json"]);
    let places: Vec<&str> = v["per_place"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["place"].as_str().unwrap())
        .collect();
    assert!(places.contains(&"p=7"), "{places:?}");

    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "e.toml", "kind = \"interval\"\na = -2\nb = 2\n");
    let v = json(&[
        "height", "rumely", "--poly", "-3 0 1", "--set", &set, "--json",
    ]);
    assert!(v["total"].as_f64().unwrap().abs() < 1e-6);

    let v = json(&[
        "height",
        "canonical",
        "--poly",
        "-3 1",
        "--dyn",
        "0 0 1",
        "--json",
    ]);
    assert!((v["total"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-9);
    assert!(
        !bin(&["height", "canonical", "--alpha", "3", "--dyn", "0 0 2"])
            .status
            .success()
    );
    assert!(!bin(&["height", "rumely", "--alpha", "3"]).status.success());
}

#[test]
fn julia_raster_and_brolin_csv() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("basilica.pgm");
    json(&[
        "julia",
        "--poly",
        "-1 0 1",
        "--out",
        pgm.to_str().unwrap(),
        "--size",
        "32",
    ]);
    assert!(std::fs::read(&pgm).unwrap().starts_with(b"P5"));
    assert!(dir.path().join("basilica.json").is_file());

    let out = bin(&["brolin", "--poly", "-2 0 1", "--n", "64", "--seed", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("re,im,weight"));
    assert_eq!(text.lines().count(), 65);
    let again = bin(&[
        "--threads",
        "1",
        "brolin",
        "--poly",
        "-2 0 1",
        "--n",
        "64",
        "--seed",
        "7",
    ]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn experiment_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "name = \"run\"\nfamily = \"runaway\"\ndegree_range = [4, 7]\n",
    );
    let out = dir.path().join("out");
    let res = bin(&[
        "experiment",
        "runaway",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let manifest: Value =
        serde_json::from_slice(&std::fs::read(out.join("MANIFEST.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["passed"], true);
    let csv = std::fs::read_to_string(out.join("run.csv")).unwrap();
    assert!(csv.starts_with("d,N_d,inside,max_modulus,weil_height,log_n_over_d"));
    assert_eq!(csv.lines().count(), 5);

    let res = bin(&[
        "experiment",
        "bilu-rumely",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
}
