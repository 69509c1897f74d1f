use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gromon_core::json::space_from_json;
use gromon_core::scalar::Rational;
use gromon_graphs::MetricGraph;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gromon"));
    c.env_remove("GROMON_LOG");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("gromon-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn deltas(dir: &Path) {
    write(dir, "delta1.json", r#"{"n":1,"dist":[["0"]],"weights":["1"],"scalar":"rational"}"#);
    write(dir, "delta2.json", r#"{"n":2,"dist":[["0","1"],["1","0"]],"weights":["1/2","1/2"],"scalar":"rational"}"#);
}

#[test]
fn dist_gm_reports_values_and_infinity() {
    let d = scratch("gm");
    deltas(&d);
    let o = run(&d, &["dist", "gm", "--p", "1", "delta2.json", "delta1.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["witness"], serde_json::json!([0, 0]));
    assert_eq!(v["method"], "exact");

    let o = run(&d, &["dist", "gm", "delta1.json", "delta2.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_of(&o)["value"], "inf");

    // p = 2 stays exact as a p-th power
    let v = json_of(&run(&d, &["dist", "gm", "--p", "2", "delta2.json", "delta1.json"]));
    assert_eq!(v["pth_power"], "1/2");

    let v = json_of(&run(&d, &["dist", "gm", "--scalar", "float", "delta2.json", "delta1.json"]));
    assert_eq!(v["value"], 0.5);
}

#[test]
fn malformed_input_exits_with_one() {
    let d = scratch("bad");
    write(&d, "bad.json", r#"{"n":2,"dist":[["0","1"]]}"#);
    deltas(&d);
    let o = run(&d, &["dist", "gm", "bad.json", "delta1.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(run(&d, &["dist", "gm", "missing.json", "delta1.json"]).status.code(), Some(1));
    // randomized commands insist on a seed
    assert_eq!(run(&d, &["gen", "randomtree"]).status.code(), Some(1));
    assert_eq!(run(&d, &["gen", "lobetree", "--matrix", "1,2,3"]).status.code(), Some(1));
}

#[test]
fn bloom_sets_have_zero_global_bound() {
    let d = scratch("bloom");
    assert_eq!(run(&d, &["gen", "bloom", "--out-dir", "."]).status.code(), Some(0));
    let o = run(&d, &["dist", "bounds", "--which", "global", "bloomX.json", "bloomY.json"]);
    assert_eq!(json_of(&o)["value"], "0");
    let all = json_of(&run(&d, &["dist", "bounds", "bloomX.json", "bloomY.json"]));
    assert_eq!(all["global"]["value"], "0");
    assert!(all["local"]["value"].as_str().unwrap() != "0");
    let gm = json_of(&run(&d, &["dist", "gm", "bloomX.json", "bloomY.json"]));
    assert_ne!(gm["value"], "0");
    let sandwich = run(&d, &["verify", "sandwich", "bloomX.json", "bloomY.json"]);
    assert_eq!(sandwich.status.code(), Some(0));
}

#[test]
fn generated_documents_parse_back() {
    let d = scratch("schemas");
    for args in [
        vec!["gen", "curve", "--kind", "circle", "--m", "64"],
        vec!["gen", "curve", "--kind", "ellipse", "--a", "1.5", "--b", "1", "--m", "40"],
        vec!["gen", "curve", "--kind", "polygon", "--vertices", "0,0;2,0;2,1;0,1", "--m", "24"],
        vec!["gen", "sphere", "--dim", "2", "--m", "200", "--seed", "4"],
    ] {
        let o = run(&d, &args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json_of(&o);
        let x = space_from_json::<f64>(&v, Some(1e-9)).unwrap();
        assert_eq!(x.n(), v["provenance"]["count"].as_u64().unwrap() as usize);
    }
    let circle = json_of(&run(&d, &["gen", "curve", "--kind", "circle", "--m", "64"]));
    assert_eq!(circle["n"], 64);

    let o = run(&d, &["gen", "lobetree", "--matrix", "5,10,5,3,3,14,1,7,12"]);
    let g = MetricGraph::from_json(&json_of(&o)).unwrap();
    assert!(g.is_tree());
    assert_eq!(g.leaves().len(), 60);
}

#[test]
fn seeded_output_is_byte_identical() {
    let d = scratch("seeds");
    for args in [vec!["gen", "randomtree", "--seed", "9"], vec!["gen", "sphere", "--m", "50", "--seed", "9"]] {
        let a = run(&d, &args);
        let b = run(&d, &args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&d, &["gen", "randomtree", "--seed", "9"]);
    let b = run(&d, &["gen", "randomtree", "--seed", "10"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn multiset_reconstruction_through_files() {
    let d = scratch("trees");
    fs::write(d.join("t.json"), run(&d, &["gen", "randomtree", "--seed", "3"]).stdout).unwrap();
    let o = run(&d, &["invariant", "nodemultiset", "t.json", "--out", "ms.json"]);
    assert_eq!(o.status.code(), Some(0));
    let back = json_of(&run(&d, &["tree", "reconstruct", "ms.json"]));
    let canon = json_of(&run(&d, &["tree", "canon", "t.json"]));
    assert_eq!(back["canonical"], canon["canonical"]);

    let o = run(&d, &["tree", "delta", "t.json", "t.json"]);
    assert_eq!(json_of(&o)["value"], "0");

    write(&d, "s.json", r#"{"nodes":4,"edges":[{"u":0,"v":1,"len":"1"},{"u":0,"v":2,"len":"3/2"},{"u":0,"v":3,"len":"2"}]}"#);
    let o = run(&d, &["gen", "gluetree", "s.json", "t.json", "--leaf", "1", "--delta", "1/3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(MetricGraph::from_json(&json_of(&o)).unwrap().is_tree());
}

#[test]
fn partition_verification_passes_and_fails() {
    let d = scratch("partition");
    let o = run(&d, &["gen", "curve", "--kind", "mallows-clarke", "--m", "32", "--out-dir", "."]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&d, &["verify", "partition", "mallowsX.json", "mallowsY.json", "mallowspairing.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json_of(&o)["partition_check"], true);

    // matching blocks by name fails for the octagon
    let p: Value = serde_json::from_str(&fs::read_to_string(d.join("mallowspairing.json")).unwrap()).unwrap();
    let mut identity = p.clone();
    identity["pairs"] = (0..8).flat_map(|i| (0..8).map(move |j| serde_json::json!([i, j, i, j]))).collect();
    fs::write(d.join("identity.json"), identity.to_string()).unwrap();
    let o = run(&d, &["verify", "partition", "mallowsX.json", "mallowsY.json", "identity.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_of(&o)["pass"], false);

    // the combined document carries its own pairing
    fs::write(d.join("pair.json"), run(&d, &["gen", "polyhedron", "--height", "1/3"]).stdout).unwrap();
    assert_eq!(run(&d, &["verify", "partition", "pair.json"]).status.code(), Some(0));
}

#[test]
fn suites_report_zero_violations() {
    let d = scratch("suites");
    let v = json_of(&run(&d, &["verify", "quasimetric", "--n", "4", "--trials", "5", "--seed", "2"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["violations"], serde_json::json!([]));
    let v = json_of(&run(&d, &["verify", "reconstruct", "--trials", "10", "--seed", "7"]));
    assert_eq!(v["passed"], 10);
    let v = json_of(&run(&d, &["verify", "sandwich", "--n", "4", "--trials", "5", "--seed", "1"]));
    assert_eq!(v["pass"], true);
}

#[test]
fn taylor_fit_from_csv() {
    let d = scratch("fit");
    let mut csv = String::from("r,H\n");
    for i in 1..=300 {
        let r = i as f64 / 1000.0;
        csv.push_str(&format!("{r},{}\n", (2.0 / PI) * (r / 2.0).asin()));
    }
    write(&d, "h.csv", &csv);
    let v = json_of(&run(&d, &["fit", "taylor", "h.csv", "--degrees", "1,3", "--window", "0.3"]));
    let c1 = v["coeffs"][0].as_f64().unwrap();
    let c3 = v["coeffs"][1].as_f64().unwrap();
    // the truncated r⁵ term biases c1 by about 1e-5
    assert!((c1 - 1.0 / PI).abs() < 1e-4);
    assert!((c3 - 1.0 / (24.0 * PI)).abs() / (1.0 / (24.0 * PI)) < 0.05);

    // the CSV printed by `invariant global` feeds the fit
    fs::write(d.join("circle.json"), run(&d, &["gen", "curve", "--kind", "circle", "--m", "400"]).stdout).unwrap();
    let o = run(&d, &["invariant", "global", "circle.json", "--csv", "--out", "hc.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&run(&d, &["fit", "taylor", "hc.csv"]));
    assert!((v["coeffs"][0].as_f64().unwrap() - 1.0 / PI).abs() < 0.02);
}

#[test]
fn local_distributions_as_json() {
    let d = scratch("local");
    deltas(&d);
    let v = json_of(&run(&d, &["invariant", "local", "delta2.json"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    let v = json_of(&run(&d, &["invariant", "local", "delta2.json", "--point", "1"]));
    assert_eq!(v["breakpoints"], serde_json::json!(["0", "1"]));
    assert_eq!(v["values"], serde_json::json!(["1/2", "1"]));
    let v = json_of(&run(&d, &["invariant", "global", "delta2.json"]));
    let _: Vec<Rational> = v["values"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect();
}
