use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_envlab"))
        .args(args)
        .env_remove("ENVLAB_TRUNC")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}\n{err}"));
    (code, v)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn hilb2_walls() {
    let (code, v) = json(&["compute", "walls", "--model", "hilb", "--n", "2", "--range", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "envlab.points/1");
    assert_eq!(strings(&v["points"]), ["0", "1/2", "1"]);
}

#[test]
fn toy_resonances() {
    let (code, v) = json(&["compute", "resonances", "--model", "toy", "--range", "-2,2"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&v["points"]), ["-2", "-1", "0", "1", "2"]);
}

#[test]
fn toy_limit() {
    let (code, v) = json(&["compute", "limit", "--model", "toy", "--slope", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "envlab.matrix/1");
    assert_eq!(strings(&v["index"]), ["p-", "p+"]);
    let e = &v["entries"];
    assert_eq!(e[0][0], "1");
    assert_eq!(e[0][1], "0");
    assert_eq!(e[1][0], "1/(-1 + 1*a)");
    assert_eq!(e[1][1], "1");
}

#[test]
fn regular_rmatrix_is_identity() {
    let (code, v) = json(&["compute", "rmatrix", "--model", "toy", "--slope", "2/5"]);
    assert_eq!(code, 0);
    assert_eq!(v["entries"], serde_json::json!([["1", "0"], ["0", "1"]]));
    let (code, out, _) = run(&[
        "compute", "rmatrix", "--model", "toy", "--slope", "2/5", "--format", "table",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# rmatrix toy"));
}

#[test]
fn wall_rmatrix_is_not_identity() {
    let (code, v) = json(&["compute", "rmatrix", "--model", "toy", "--slope", "0"]);
    assert_eq!(code, 0);
    assert_ne!(v["entries"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn verify_examples_pass() {
    for args in [
        &[
            "verify",
            "orthogonality",
            "--model",
            "hilb",
            "--n",
            "2",
            "--slope",
            "1/3",
        ][..],
        &["verify", "factorization", "--model", "toy", "--slope", "0"],
        &["verify", "all", "--model", "hilb", "--n", "1"],
        &["verify", "all", "--model", "toy"],
    ] {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}: {v:#}");
        assert_eq!(v["schema"], "envlab.report/1");
        assert_eq!(v["passed"], true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
    }
}

#[test]
fn factorization_reports_certificate() {
    let (_, v) = json(&["verify", "factorization", "--model", "toy", "--slope", "0"]);
    let c = &v["checks"][0];
    assert_eq!(c["detail"]["limit"], "elliptic");
    assert_eq!(c["detail"]["zpp"][1][0], "1/(-1 + 1*z)");
}

#[test]
fn violations_exit_3() {
    let (code, v) = json(&["compute", "interface", "--model", "hilb", "--n", "2", "--slope", "1/2"]);
    assert_eq!(code, 3);
    assert_eq!(v["meta"]["glued"], false);
    let (code, v) = json(&["verify", "mirror", "--model", "hilb", "--n", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["passed"], false);
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["compute", "limit", "--model", "toy", "--slope", "0.3"][..],
        &["compute", "limit", "--model", "hilb", "--n", "2", "--slope", "1/3"],
        &["compute", "walls", "--model", "nope"],
        &["compute", "walls", "--model", "hilb"],
        &["compute", "stab", "--model", "toy", "--slope", "1/0"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {out}{err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn deterministic_output() {
    let args = ["compute", "stab", "--model", "hilb", "--n", "2", "--slope", "1/3"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("envlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("walls.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["compute", "walls", "--model", "hilb", "--n", "3", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(strings(&v["points"]), ["0", "1/3", "1/2", "2/3", "1"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_model_matches_builtin() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/models/toy.json");
    for slope in ["0", "1/3"] {
        let file = run(&["compute", "rmatrix", "--model", path, "--slope", slope]);
        let builtin = run(&["compute", "rmatrix", "--model", "toy", "--slope", slope]);
        assert_eq!(file.0, 0, "{}", file.2);
        assert_eq!(file.1, builtin.1);
    }
}
