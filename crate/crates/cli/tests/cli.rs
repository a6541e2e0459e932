use std::process::{Command, Output};

use serde_json::Value;

fn coxforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxforge"))
        .args(args)
        .env_remove("COXFORGE_CAP")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = coxforge(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(coxforge(args).stdout).unwrap()
}

#[test]
fn orbit_of_d5() {
    assert_eq!(json(&["orbit", "--ctx", "2,2,3"]).as_array().unwrap().len(), 16);
}

#[test]
fn table_decomposition() {
    let out = stdout(&["decompose", "--n", "3", "--d", "5", "--m", "3,3,2,5,1", "--format", "table"]);
    assert_eq!(
        out.lines().collect::<Vec<_>>(),
        [
            "H - E1 - E2 - E4",
            "H - E1 - E3 - E4",
            "H - E1 - E3 - E4",
            "H - E2 - E4 - E5",
            "H - E2 - E4"
        ]
    );
}

#[test]
fn all_invariants_n4() {
    let out = stdout(&["invariant", "check", "--n", "4", "--all", "--format", "table"]);
    assert_eq!(out.trim(), "2^6 = 64 invariants verified");
}

#[test]
fn exit_codes() {
    assert_eq!(coxforge(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(coxforge(&["--help"]).status.code(), Some(0));
    assert_eq!(coxforge(&["orbit", "--ctx", "3,3,3"]).status.code(), Some(2));
    let bad = coxforge(&["h0", "--n", "2", "--d", "2", "--m", "1,1,1,1,1", "--params", "1,1,2,3,4"]);
    assert_eq!(bad.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(err["error"], "colliding_params");
    let pre = coxforge(&["decompose", "--n", "2", "--d", "1", "--m", "2"]);
    assert_eq!(pre.status.code(), Some(1));
}

#[test]
fn env_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_coxforge"))
        .args(["orbit", "--ctx", "2,3,3"])
        .env("COXFORGE_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["check-generation", "--n", "2", "--d", "3", "--m", "2,1,1,1,1,1", "--seed", "7"];
    assert_eq!(coxforge(&args).stdout, coxforge(&args).stdout);
}

#[test]
fn classes_round_trip() {
    let orbit = json(&["orbit", "--ctx", "2,2,4"]);
    for class in orbit.as_array().unwrap().iter().take(5) {
        let again = json(&["orbit", "--class", &class.to_string()]);
        assert!(again.as_array().unwrap().contains(class));
        let member = json(&["member", "--class", &class.to_string()]);
        assert_eq!(member["member"], true);
    }
}

#[test]
fn section_and_multiplicities() {
    let f = stdout(&["section", "--n", "2", "--d", "2", "--m", "1,1,1,1,1", "--format", "table"]);
    assert_eq!(f.trim(), "z0*z2 - z1^2");
    let m = json(&["mult", "--n", "3", "--d", "2", "--m", "2,1,1,1,1,1"]);
    assert_eq!(m["points"], serde_json::json!([2, 1, 1, 1, 1, 1]));
    assert_eq!(m["curve"], 1);
}

#[test]
fn point_config_json() {
    let pts = r#"{"n":2,"r":5,"params":["1/2","2","3","-1","5"]}"#;
    let h = json(&["h0", "--n", "2", "--d", "2", "--m", "1,1,1,1,1", "--points", pts]);
    assert_eq!(h["h0"], 1);
    let h = json(&["h0", "--n", "2", "--d", "1", "--m", "1,1,1,0,0", "--points", pts]);
    assert_eq!(h["h0"], 0);
}

#[test]
fn invariant_class() {
    let v = json(&["invariant", "class", "-I", "1,2,3,4,5", "--n", "3"]);
    assert_eq!(v["class"]["d"], 2);
    assert_eq!(v["class"]["m"], serde_json::json!([1, 1, 1, 1, 1, 2]));
}
