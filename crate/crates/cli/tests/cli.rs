use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn gabor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabor"))
        .args(args)
        .env_remove("GABOR_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = gabor(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    gabor(args).status.code().unwrap()
}

#[test]
fn rank_of_comb() {
    let r = json(&["rank", "--d", "4", "--gen", "comb:2"]);
    assert_eq!(r["spectrum"]["rank"], 4);
    assert_eq!(r["schema_version"], "1");
    assert_eq!(r["command"], "rank");
}

#[test]
fn bjorck_has_eight_angles() {
    let r = json(&["angles", "--d", "7", "--gen", "bjorck"]);
    assert_eq!(r["angles"]["count"], 8);
    assert_eq!(r["spectrum"]["rank"], 37);
}

#[test]
fn real_balanced_vector_is_not_ic() {
    assert_eq!(code(&["spectrum", "--d", "2", "--vec", "[[0.7071,0],[0.7071,0]]"]), 3);
    let r = json(&["spectrum", "--d", "2", "--normalize", "--vec", "[[0.7071,0],[0.7071,0]]"]);
    assert_eq!(r["spectrum"]["is_ic"], false);
    let h = "0.7071067811865476";
    let exact = format!("[[{h},0],[{h},0]]");
    let r = json(&["spectrum", "--vec", &exact]);
    assert_eq!(r["spectrum"]["is_ic"], false);
    assert_eq!(r["d"], 2);
}

#[test]
fn spectrum_shape_and_csv_agree() {
    let r = json(&["spectrum", "--d", "5", "--gen", "haar:3"]);
    let grid = r["spectrum"]["eigenvalues"].as_array().unwrap();
    assert_eq!(grid.len(), 5);
    assert!(grid.iter().all(|row| row.as_array().unwrap().len() == 5));
    let csv = gabor(&["spectrum", "--d", "5", "--gen", "haar:3", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    for (a, row) in rows.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            assert_eq!(x.to_bits(), grid[a][b].as_f64().unwrap().to_bits());
        }
    }
}

#[test]
fn vectors_round_trip_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let first_s = first.to_str().unwrap();
    let out = gabor(&["spectrum", "--d", "6", "--gen", "haar:11", "--out", first_s]);
    assert!(out.status.success());
    let a: Value = serde_json::from_str(&fs::read_to_string(&first).unwrap()).unwrap();
    let b = json(&["spectrum", "--in", first_s]);
    assert_eq!(a["vector"], b["vector"]);
    let vec_text = serde_json::to_string(&a["vector"]).unwrap();
    let c = json(&["rank", "--vec", &vec_text]);
    let bits = |v: &Value| -> Vec<u64> {
        v.as_array()
            .unwrap()
            .iter()
            .flat_map(|p| p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap().to_bits()))
            .collect()
    };
    assert_eq!(bits(&a["vector"]), bits(&c["vector"]));
    assert_eq!(a["spectrum"]["eigenvalues"], b["spectrum"]["eigenvalues"]);
}

#[test]
fn heatmap_bjorck() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("bjorck.pgm");
    let r = json(&["heatmap", "--d", "7", "--gen", "bjorck", "--out", pgm.to_str().unwrap()]);
    assert_eq!(r["distinct_values"], 8);
    let bytes = fs::read(&pgm).unwrap();
    let header = b"P5\n7 7\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 49);
    assert_eq!(bytes[header.len()], 255);
    let csv = fs::read_to_string(dir.path().join("bjorck.pgm.csv")).unwrap();
    let mut values: Vec<f64> = csv
        .lines()
        .flat_map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .collect();
    assert_eq!(values.len(), 49);
    values.sort_by(f64::total_cmp);
    let mut distinct = 1;
    for w in values.windows(2) {
        if w[1] - w[0] > 1e-9 {
            distinct += 1;
        }
    }
    assert_eq!(distinct, 8);
}

fn pixels(args: &[&str], d: usize) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("h.pgm");
    let mut all = args.to_vec();
    all.extend(["--out", pgm.to_str().unwrap()]);
    json(&all);
    let bytes = fs::read(&pgm).unwrap();
    bytes[bytes.len() - d * d..].to_vec()
}

#[test]
fn heatmap_patterns() {
    // constant vector: |<g, M^k T^l g>| = 1 iff k = 0
    let p = pixels(&["heatmap", "--d", "4", "--gen", "comb:1"], 4);
    for k in 0..4 {
        for l in 0..4 {
            assert_eq!(p[k * 4 + l], if k == 0 { 255 } else { 0 }, "({k},{l})");
        }
    }
    // spike: 1 iff l = 0
    let p = pixels(&["heatmap", "--d", "3", "--gen", "spike"], 3);
    for k in 0..3 {
        for l in 0..3 {
            assert_eq!(p[k * 3 + l], if l == 0 { 255 } else { 0 }, "({k},{l})");
        }
    }
}

#[test]
fn heatmap_unwritable_path() {
    assert_eq!(
        code(&["heatmap", "--d", "3", "--gen", "spike", "--out", "/nonexistent/dir/h.pgm"]),
        4
    );
    assert_eq!(code(&["heatmap", "--d", "3", "--gen", "spike"]), 2);
}

#[test]
fn transform_keeps_rank() {
    let r = json(&["transform", "--d", "5", "--gen", "alltop:1,0,0", "--apply", "mult:2"]);
    assert_eq!(r["before"]["rank"], 21);
    assert_eq!(r["after"]["rank"], 21);
    assert_eq!(r["rank_preserved"], true);
    assert_eq!(r["angles_preserved"], true);
    let r = json(&[
        "transform", "--d", "6", "--gen", "haar:2", "--apply", "translate:2;quad:1,0.5,0", "--apply", "phase:0,1",
    ]);
    assert_eq!(r["transforms"].as_array().unwrap().len(), 3);
    assert_eq!(r["rank_preserved"], true);
    assert_eq!(code(&["transform", "--d", "4", "--gen", "spike", "--apply", "mult:2"]), 3);
    assert_eq!(code(&["transform", "--d", "4", "--gen", "spike", "--apply", "warp:1"]), 2);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "--suite", "rank-gap", "--d", "5", "--trials", "10000", "--seed", "7"]), 0);
    assert_eq!(code(&["verify", "--suite", "oracle-equivalence", "--d", "6", "--trials", "200"]), 0);
    assert_eq!(code(&["verify", "--suite", "no-such-suite", "--d", "5"]), 2);
    // a spike is not mutually unbiased with the standard basis
    let out = gabor(&["verify", "--suite", "mub", "--d", "5", "--gen", "spike"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(r["suite"], "mub");
    let r = json(&["verify", "--suite", "mub", "--d", "7", "--gen", "alltop:1,0,0"]);
    assert_eq!(r["metrics"]["bases"], 8.0);
    let r = json(&["verify", "--suite", "dim45", "--trials", "200"]);
    assert_eq!(r["passed"], true);
}

#[test]
fn search_small_dimension() {
    let r = json(&["search", "--d", "3", "--restarts", "8", "--seed", "1"]);
    assert!(r["objective"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["is_sic"], true);
    assert_eq!(r["rank"], 9);
    assert_eq!(r["seed"], 1);
    let vec_text = serde_json::to_string(&r["vector"]).unwrap();
    let s = json(&["spectrum", "--vec", &vec_text]);
    assert_eq!(s["spectrum"]["is_sic"], true);
    assert_eq!(code(&["search", "--d", "3", "--restarts", "0"]), 2);
}

#[test]
fn input_errors() {
    assert_eq!(code(&["rank", "--d", "4"]), 2);
    assert_eq!(code(&["rank", "--gen", "comb:2"]), 2);
    assert_eq!(code(&["rank", "--d", "4", "--gen", "lattice:3"]), 2);
    assert_eq!(code(&["rank", "--vec", "[[1,0],[2]]"]), 2);
    assert_eq!(code(&["rank", "--vec", "not json"]), 2);
    assert_eq!(code(&["rank", "--d", "3", "--vec", "[[1,0],[0,0]]"]), 3);
    assert_eq!(code(&["rank", "--vec", "[[0,0],[0,0]]"]), 3);
    assert_eq!(code(&["rank", "--in", "/nonexistent/v.json"]), 4);
    assert_eq!(code(&["rank", "--d", "3", "--gen", "spike", "--tol", "-1"]), 2);
}

#[test]
fn tolerance_from_environment() {
    // off-origin |a| are 0.28, 0.92, 0.28; a zero threshold of 0.5 drops two
    let args = ["rank", "--d", "2", "--gen", "twospike:1,0.6,0,0.3", "--angle-tol", "0.5"];
    let plain = json(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_gabor"))
        .args(args)
        .env("GABOR_TOL", "0.5")
        .output()
        .unwrap();
    assert!(out.status.success());
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["tolerances"]["zero_tol"], 0.5);
    assert!(env["spectrum"]["rank"].as_u64() < plain["spectrum"]["rank"].as_u64());
}
