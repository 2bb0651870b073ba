use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn qshape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshape"))
        .args(args)
        .output()
        .expect("spawn qshape")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn example(args: &[&str]) -> Output {
    let ws = data("example.json");
    let mut all = args.to_vec();
    all.extend(["--workspace", ws.to_str().unwrap()]);
    qshape(&all)
}

#[test]
fn shipped_workspaces_validate() {
    for name in ["cpx.json", "cpx3.json", "mesh_a2.json", "example.json"] {
        let out = qshape(&["validate", "--workspace", data(name).to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(json_of(&out)["pass"], true);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = example(&["cohom", "--qmod", "stalk", "--object", "2"]);
    let b = example(&["cohom", "--qmod", "stalk", "--object", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn empty_workspace_is_a_located_parse_error() {
    let dir = std::env::temp_dir().join(format!("qshape-empty-{}", std::process::id()));
    std::fs::write(&dir, "").unwrap();
    let out = qshape(&["validate", "--workspace", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], "parse_error");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 1"));
}

#[test]
fn disc_is_trivial_and_stalk_is_not() {
    let out = example(&["trivial", "--structure", "abelian", "--qmod", "disc0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["verdict"], true);

    let out = example(&["trivial", "--qmod", "stalk"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["result"]["verdict"], false);
    assert!(!v["result"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn false_weq_verdict_carries_witnesses() {
    let out = example(&["weq", "--map", "stalk_to_zero"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!json_of(&out)["result"]["witnesses"]
        .as_array()
        .unwrap()
        .is_empty());

    let out = example(&["weq", "--map", "disc_to_zero"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cohomology_routes_agree_on_stalk() {
    // A stalk complex at 3: the only nonzero cohomology sits in degree 3.
    for (object, dim) in [("2", 1), ("1", 0), ("3", 0)] {
        let out = example(&["cohom", "--qmod", "stalk", "--object", object]);
        let v = json_of(&out);
        assert_eq!(v["routes_agree"], true);
        assert_eq!(v["dim_via_tac"], dim, "object {object}");
    }
}

#[test]
fn projective_disc_has_verified_tac() {
    let out = example(&["tac", "--qmod", "dual_disc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verification"]["ok"], true);
}

#[test]
fn gen_mesh_round_trips_through_validate() {
    let out = qshape(&["gen-mesh", "--family", "mesh:3", "--window", "0..4"]);
    assert_eq!(out.status.code(), Some(0));
    let path = std::env::temp_dir().join(format!("qshape-mesh-{}.json", std::process::id()));
    std::fs::write(&path, &out.stdout).unwrap();
    let out = qshape(&["validate", "--workspace", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_names_are_errors() {
    let out = example(&["tac", "--qmod", "missing"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["kind"], "error");
}
