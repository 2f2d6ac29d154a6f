use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spheremap::formats::{PolyDoc, SphereMapDoc};
use spheremap_core::maps::SphereMap;
use spheremap_core::MultiPoly;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spheremap")).args(args).output().expect("spawn spheremap")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn qtable_values_up_to_15() {
    let out = run(&["qtable", "--max-n", "15", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_stdout(&out);
    let got: Vec<(u64, u64, bool)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["q"]["n"].as_u64().unwrap(), r["q"]["upper"].as_u64().unwrap(), r["q"]["exact"].as_bool().unwrap()))
        .collect();
    let want: Vec<(u64, u64, bool)> = (2..=15u64)
        .map(|n| {
            (
                n,
                if n < 4 {
                    2
                } else if n < 8 {
                    4
                } else {
                    8
                },
                true,
            )
        })
        .collect();
    assert_eq!(got, want);
}

#[test]
fn qtable_csv_has_header_and_rows() {
    let out = run(&["qtable", "--max-n", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("n,q,"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn verify_map_accepts_hopf_and_rejects_broken() {
    let good = run(&["verify-map", data("hopf_s3.json").to_str().unwrap()]);
    assert_eq!(good.status.code(), Some(0));
    let rep = json_stdout(&good);
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["is_constant"], false);

    let bad = run(&["verify-map", data("broken.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let rep = json_stdout(&bad);
    assert_eq!(rep["pass"], false);
    assert!(!rep["residual"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn constant_map_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("constant.json");
    let doc = SphereMapDoc::from(&SphereMap::constant(3, 2));
    std::fs::write(&map, serde_json::to_string(&doc).unwrap()).unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&["verify-map", map.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = read_json(&cert);
    assert_eq!(c["facts"]["is_constant"], true);
    assert!(c["object_hash"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn hopf_chain_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let (map, cert) = (dir.path().join("m.json"), dir.path().join("c.json"));
    let out = run(&["hopf", "--chain", "S31_to_S16", "--out", map.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = read_json(&cert);
    assert_eq!(c["facts"]["degree_repr"], 4);
    assert_eq!(c["facts"]["source_dim"], 31);
    assert_eq!(c["facts"]["target_dim"], 16);
    assert!(c["invariants"].as_array().unwrap().iter().all(|i| i["pass"] == true));

    let reread = run(&["verify-map", map.to_str().unwrap()]);
    assert_eq!(reread.status.code(), Some(0));
}

#[test]
fn emitted_map_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = run(&["hopf", "--odd", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: SphereMapDoc = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let map = doc.to_map().unwrap();
    assert_eq!(SphereMapDoc::from(&map), doc);
    assert_eq!((map.source_dim(), map.target_dim()), (3, 2));
}

#[test]
fn clifford_certificate_counts_structures() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = run(&["clifford", "--m", "16", "--cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = read_json(&cert);
    assert_eq!(c["facts"]["structures"], 8);
    assert_eq!(c["facts"]["radon_hurwitz"], 9);
}

#[test]
fn hodge_check_dim4() {
    let out = run(&["--seed", "3", "hodge-check", "--dim", "4", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_stdout(&out);
    assert_eq!(rep["isometry"], true);
    assert_eq!(rep["equivariance"]["failures"], 0);
    assert_eq!(rep["fiber_map_matches_hopf"], true);
    assert_eq!(rep["seed"], 3);
}

#[test]
fn hodge_check_rejects_odd_dimension() {
    assert_eq!(run(&["hodge-check", "--dim", "5"]).status.code(), Some(2));
}

#[test]
fn harmonic_degree_of_hopf() {
    let out = run(&["harmonic-degree", data("hopf_s3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_stdout(&out);
    assert_eq!(rep["coordinates"], serde_json::json!([2, 2, 2]));
    assert_eq!(rep["map"], 2);
}

#[test]
fn wilson_perturbed_is_simple_and_symmetric_collides() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let ok = run(&[
        "wilson",
        "--group",
        data("group_perturbed.json").to_str().unwrap(),
        "--bundle",
        data("bundle_unitary2.json").to_str().unwrap(),
        "--max-word-len",
        "5",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let r = read_json(&report);
    assert_eq!(r["simple_length_spectrum"], true);
    assert_eq!(r["wilson_bounded_by_rank"], true);
    let entries = json_stdout(&ok);
    assert!(entries.as_array().unwrap().iter().any(|e| e["primitive"] == false));

    let bad = run(&[
        "wilson",
        "--group",
        data("group_symmetric.json").to_str().unwrap(),
        "--bundle",
        data("bundle_trivial2.json").to_str().unwrap(),
        "--max-word-len",
        "3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let r = read_json(&report);
    assert_eq!(r["simple_length_spectrum"], false);
    let pairs: Vec<(String, String)> = r["collisions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["first"].as_str().unwrap().to_string(), c["second"].as_str().unwrap().to_string()))
        .collect();
    assert!(pairs.iter().any(|(a, b)| (a == "a" && b == "b") || (a == "b" && b == "a")), "{pairs:?}");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(&["verify-map", "/nonexistent/map.json"]).status.code(), Some(2));
    assert_eq!(run(&["hopf", "--chain", "S7_to_S3"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn malformed_poly_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"source_dim": 1, "target_dim": 1, "coords": [{"nvars": 2, "terms": [[[1, 0], "1/0"]]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["verify-map", path.to_str().unwrap()]).status.code(), Some(2));
    let p = PolyDoc::from_poly(&MultiPoly::<spheremap_core::Rational>::var(2, 0));
    assert_eq!(p.to_poly::<spheremap_core::Rational>().unwrap(), MultiPoly::var(2, 0));
}
