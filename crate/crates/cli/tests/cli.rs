use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cliquesep"));
    c.env_remove("CLIQUESEP_THREADS");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cliquesep-cli-{}-{}", name, std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &PathBuf, args: &[&str]) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

#[test]
fn exit_codes() {
    let d = scratch("codes");
    assert_eq!(run(&d, &["gen", "map", "--voronoi", "40", "--seed", "3", "--out", "m.json"]).status.code(), Some(0));
    assert_eq!(run(&d, &["sep", "m.json", "--out", "s.json"]).status.code(), Some(0));
    let sep: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("s.json")).unwrap()).unwrap();
    assert_eq!(sep["verified"], serde_json::json!(true));
    assert!(sep.get("A").is_some() && sep.get("B").is_some());
    assert_eq!(run(&d, &["verify", "m.json", "s.json"]).status.code(), Some(0));

    let mut bad = sep.clone();
    bad["weight"] = serde_json::json!(sep["weight"].as_f64().unwrap() + 1.0);
    std::fs::write(d.join("bad.json"), bad.to_string()).unwrap();
    let out = run(&d, &["verify", "m.json", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight mismatch"));

    let mut moved = sep.clone();
    let v = moved["cliques"][0].as_array_mut().unwrap().pop().unwrap();
    moved["A"].as_array_mut().unwrap().push(v);
    std::fs::write(d.join("moved.json"), moved.to_string()).unwrap();
    assert_eq!(run(&d, &["verify", "m.json", "moved.json"]).status.code(), Some(1));

    std::fs::write(d.join("broken.json"), "{\"class\": \"map\"").unwrap();
    assert_eq!(run(&d, &["sep", "broken.json"]).status.code(), Some(2));
    assert_eq!(run(&d, &["sep", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&d, &["gen", "visibility", "--comb", "3", "9"]).status.code(), Some(2));
    assert_eq!(run(&d, &["frobnicate"]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn abstract_and_empty_instances() {
    let d = scratch("abstract");
    assert_eq!(run(&d, &["gen", "abstract", "--petersen", "--out", "p.json"]).status.code(), Some(0));
    let out = run(&d, &["sep", "p.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no geometric separator for abstract class"));
    let out = run(&d, &["solve", "p.json", "--problem", "mis", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["value"], serde_json::json!(4));
    assert_eq!(r["verified"], serde_json::json!(true));
    assert!(r["wall_time_ms"].is_null());

    std::fs::write(d.join("e.json"), r#"{"class":"visibility","polygon":{"outer":[[0,0],[3,0],[3,3],[0,3]]},"points":[]}"#).unwrap();
    let out = run(&d, &["sep", "e.json"]);
    assert_eq!(out.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s["cliques"], serde_json::json!([]));
    assert_eq!(s["A"], serde_json::json!([]));
    assert_eq!(s["B"], serde_json::json!([]));
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn solve_reports_and_thread_override() {
    let d = scratch("solve");
    run(&d, &["gen", "pseudodisk", "--disks", "14", "--sides", "16", "--seed", "2", "--out", "d.json"]);
    for p in ["mis", "fvs", "coloring"] {
        let out = run(&d, &["solve", "d.json", "--problem", p, "--base-n", "4"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        for key in ["problem", "value", "certificate", "nodes_expanded", "wall_time_ms"] {
            assert!(r.get(key).is_some(), "{} missing", key);
        }
        assert_eq!(r["verified"], serde_json::json!(true));
    }
    let out = bin().args(["bench", "map", "--sizes", "8,12,16,20,24", "--seeds", "1", "--no-timing"]).env("CLIQUESEP_THREADS", "0").current_dir(&d).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["bench", "map", "--sizes", "8,12,16,20,24", "--seeds", "1", "--no-timing", "--csv", "b.csv"]).env("CLIQUESEP_THREADS", "1").current_dir(&d).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(d.join("b.csv")).unwrap().lines().count(), 6);
    assert_eq!(run(&d, &["bench", "map", "--sizes", "8,12", "--seeds", "1"]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&d);
}
