use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_multinv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const INVERSION_3: &str = r#"{"n":3,"p":2,"generators":[[[-1,0,0],[0,-1,0],[0,0,-1]]]}"#;

#[test]
fn classify_inversion_from_stdin() {
    let out = run(&["classify"], Some(INVERSION_3));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "NotCM");
    assert_eq!(v["rule"], "R5");
    assert_eq!(v["certificate_verified"], true);
    assert_eq!(v["input"]["order"], 2);
    assert!(v["timings_us"]["total"].is_u64());
}

#[test]
fn classify_with_audit_lists_every_rule() {
    let out = run(&["classify", "--builtin", "s3-a2-x2", "--p", "3", "--audit"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "CM");
    assert_eq!(v["rule"], "R6");
    assert_eq!(v["audit"].as_array().unwrap().len(), 7);
}

#[test]
fn analyze_g1() {
    let out = run(&["analyze", "--builtin", "g1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["group"]["height_ir"], 2);
    let iso = v["isotropy"]["entries"].as_array().unwrap();
    assert_eq!(iso.len(), 2);
    assert_eq!(iso[0]["witness"], serde_json::json!([1, 0, 0]));
    assert_eq!(iso[1]["witness"], serde_json::json!([0, 0, 0]));
    assert_eq!(v["mu"]["value"], 1);
    assert_eq!(v["mu"]["exact"], true);
}

#[test]
fn cohomology_of_s3_at_3() {
    let out = run(&["cohomology", "--group", "s3-perm", "--p", "3", "--depth", "6"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 1, 1, 0, 0]));
    assert_eq!(v["mu"]["value"], 3);
    assert_eq!(v["mu_formula"], 3);
}

#[test]
fn invariants_count_agrees_with_burnside() {
    let out = run(&["invariants", "--builtin", "g1", "--ball", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dim"], 15);
    assert_eq!(v["burnside"], 15);
    assert_eq!(v["basis"].as_array().unwrap().len(), 15);
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&["classify"], Some("{\"n\": 3"));
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit_code"], 2);

    let out = run(&["classify"], Some(r#"{"n":2,"p":4,"generators":[]}"#));
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["classify"], Some(r#"{"n":2,"p":2,"generators":[[[2,0],[0,1]]]}"#));
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["classify"], Some(r#"{"n":1,"p":2,"generators":[],"extra":1}"#));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn order_bound_exits_3() {
    let job = r#"{"n":3,"p":2,"generators":[[[-1,0,0],[0,-1,0],[0,0,-1]]],"options":{"max_group_order":1}}"#;
    let out = run(&["classify"], Some(job));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn job_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("multinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(&path, INVERSION_3).unwrap();
    let out = run(&["classify", "--input", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let first = json_of(&out);
    assert_eq!(first["input"]["n"], 3);

    let listing = json_of(&run(&["corpus"], None));
    let g1 = listing["builtins"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == "g1")
        .unwrap()
        .clone();
    let job = serde_json::json!({ "n": g1["n"], "p": 2, "generators": g1["generators"] });
    std::fs::write(&path, job.to_string()).unwrap();
    let from_file = json_of(&run(&["classify", "--input", path.to_str().unwrap()], None));
    let builtin = json_of(&run(&["classify", "--builtin", "g1"], None));
    assert_eq!(from_file["status"], builtin["status"]);
    assert_eq!(from_file["rule"], builtin["rule"]);
    assert_eq!(from_file["certificate"], builtin["certificate"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--criterion", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["selftest", "--criterion", "10"], None).status.code(), Some(2));
}

#[test]
fn human_output() {
    let out = run(&["classify", "--builtin", "inversion-3", "--human"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("NotCM by R5"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
