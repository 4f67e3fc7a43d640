use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn maglap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maglap")).args(args).output().unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn payload(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["payload"].clone()
}

fn eigenvalues(p: &Value) -> Vec<f64> {
    p["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn spectrum_of_single_edge() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.txt", "e a b 1\n");
    let p = payload(&maglap(&["spectrum", s(&g)]));
    let ev = eigenvalues(&p);
    assert!(ev[0].abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    assert_eq!(p["bounds_ok"], true);
}

#[test]
fn measure_flag_switches_to_unit() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.txt", "e 0 1 1\ne 1 2 1\n");
    let deg = eigenvalues(&payload(&maglap(&["spectrum", s(&g)])));
    let unit = eigenvalues(&payload(&maglap(&["spectrum", "--measure", "unit", s(&g)])));
    // path P3: normalized {0, 1, 2}, combinatorial {0, 1, 3}
    assert!((deg[2] - 2.0).abs() < 1e-12);
    assert!((unit[2] - 3.0).abs() < 1e-12);
}

#[test]
fn c4_with_one_flip() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("c4.txt");
    assert!(maglap(&["generate", "cycle", "--vertices", "4", "--flips", "1", "--k", "2", "--out", s(&out)]).status.success());
    let ev = eigenvalues(&payload(&maglap(&["spectrum", s(&out)])));
    assert!((ev[0] - (1.0 - 0.5f64.sqrt())).abs() < 1e-10);
}

#[test]
fn balance_on_tree() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "t.txt", "s 0 1 1 1/3\ns 1 2 1 2/3\ns 1 3 2 1/3\nv 4\n");
    let p = payload(&maglap(&["balance", s(&g)]));
    assert_eq!(p["balanced"], true);
    for c in p["components"].as_array().unwrap() {
        assert_eq!(c["balanced"], true);
    }
    assert_eq!(p["components"].as_array().unwrap().len(), 2);
}

#[test]
fn converted_directed_triangle_is_balanced() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "d.txt", "a 0 1 1\na 1 2 1\na 2 0 1\n");
    let conv = d.path().join("s.txt");
    assert!(maglap(&["convert", "--k", "3", s(&g), "--out", s(&conv)]).status.success());
    let ev = eigenvalues(&payload(&maglap(&["spectrum", s(&conv)])));
    assert!(ev[0].abs() < 1e-10);
    // mixed input is converted on the fly with --k
    let ev = eigenvalues(&payload(&maglap(&["spectrum", "--k", "3", s(&g)])));
    assert!(ev[0].abs() < 1e-10);
}

#[test]
fn cheeger_exact_on_negative_triangle() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "t.txt", "s 0 1 1 1/2\ns 1 2 1 1/2\ns 2 0 1 1/2\n");
    let p = payload(&maglap(&["cheeger-exact", "-n", "1", "--measure", "unit", s(&g)]));
    assert!((p["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn generate_is_deterministic() {
    let a = maglap(&["generate", "er-signed", "--vertices", "8", "--p", "0.5", "--k", "3", "--seed", "7"]);
    let b = maglap(&["generate", "er-signed", "--vertices", "8", "--p", "0.5", "--k", "3", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn planted_pipeline_and_sidecar() {
    let d = TempDir::new().unwrap();
    let mp = d.path().join("mp.txt");
    assert!(maglap(&["generate", "mixed-planted", "--k", "3", "--seed", "3", "--out", s(&mp)]).status.success());
    let truth: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("mp.txt.truth.json")).unwrap()).unwrap();
    assert_eq!(truth["k"], 3);
    let conv = d.path().join("s.txt");
    assert!(maglap(&["convert", "--k", "3", s(&mp), "--out", s(&conv)]).status.success());
    assert_eq!(payload(&maglap(&["balance", s(&conv)]))["balanced"], true);
    let dot = d.path().join("s.dot");
    let p = payload(&maglap(&["sweep", s(&conv), "--dot", s(&dot)]));
    assert!(p["ratio"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(p["certified"], true);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph G {"));
}

#[test]
fn certificates_revalidate() {
    let d = TempDir::new().unwrap();
    let g = d.path().join("g.txt");
    assert!(maglap(&["generate", "er-signed", "--vertices", "16", "--p", "0.3", "--k", "3", "--weighted", "--seed", "5", "--out", s(&g)]).status.success());
    let sweep = payload(&maglap(&["sweep", s(&g)]));
    let multi = payload(&maglap(&["multiway", "-n", "3", "--seed", "2", s(&g)]));
    let mut certs = vec![sweep];
    certs.extend(multi["certificates"].as_array().unwrap().iter().cloned());
    for c in certs {
        let ratio = c["ratio"].as_f64().unwrap();
        assert!(ratio <= c["bound"].as_f64().unwrap() + 1e-9);
        if c["candidate"]["kind"] == "set" {
            assert!((c["recomputed_ratio"].as_f64().unwrap() - ratio).abs() < 1e-9);
        }
    }
    assert_eq!(multi["mass_fractions"].as_array().unwrap().len(), 3);
}

#[test]
fn payload_is_reproducible_across_thread_counts() {
    let d = TempDir::new().unwrap();
    let g = d.path().join("g.txt");
    assert!(maglap(&["generate", "er-signed", "--vertices", "10", "--p", "0.5", "--k", "3", "--seed", "1", "--out", s(&g)]).status.success());
    for cmd in [&["cheeger-exact", "-n", "2"][..], &["multiway", "-n", "2"], &["frustration"], &["frustration", "--heuristic"]] {
        let mut a: Vec<&str> = cmd.to_vec();
        a.extend(["--threads", "1", s(&g)]);
        let mut b: Vec<&str> = cmd.to_vec();
        b.extend(["--threads", "4", s(&g)]);
        assert_eq!(payload(&maglap(&a)), payload(&maglap(&b)), "{cmd:?}");
    }
}

#[test]
fn json_flag_writes_report_file() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.txt", "e 0 1 1\n");
    let j = d.path().join("r.json");
    let out = maglap(&["spectrum", s(&g), "--json", s(&j), "--seed", "9"]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let bad = file(&d, "bad.txt", "e 0 1 x\n");
    let out = maglap(&["spectrum", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let mix = file(&d, "mix.txt", "s 0 1 1 1/2\np 1 2 1 0.5\n");
    assert_eq!(maglap(&["balance", s(&mix)]).status.code(), Some(2));

    let big = d.path().join("big.txt");
    assert!(maglap(&["generate", "er-signed", "--vertices", "30", "--k", "3", "--out", s(&big)]).status.success());
    let out = maglap(&["cheeger-exact", "-n", "3", s(&big)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("payload"));

    assert_eq!(maglap(&["spectrum", s(&d.path().join("missing.txt"))]).status.code(), Some(1));
}
