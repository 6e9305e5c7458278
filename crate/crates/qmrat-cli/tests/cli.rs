use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qmrat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmrat")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "instances", name].iter().collect();
    p.display().to_string()
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qmrat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn decide_c4_example() {
    let o = qmrat(&["decide", &instance("c4_example.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "rational");
    assert_eq!(v["clause"], "(5)(II)");
    assert_eq!(v["certificate"]["kind"], "explicit_generators");
    assert_eq!(v["certificate"]["invariance_checked"], true);
    assert_eq!(v["symbols"].as_array().unwrap().len(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rational"));
}

#[test]
fn decide_output_is_deterministic() {
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    for f in ["c4_example.toml", "d4_octic.toml", "c3_omega.toml"] {
        let a = qmrat(&["decide", &instance(f), "--json-only"]);
        let b = qmrat(&["decide", &instance(f), "--json-only"]);
        assert_eq!(strip(&a), strip(&b), "{f}");
        assert!(a.stderr.is_empty());
    }
}

#[test]
fn exit_codes_follow_the_verdict() {
    let o = qmrat(&["decide", &instance("c2_2_obstructed.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["symbols"][0]["witness"]["ramified"], serde_json::json!(["2", "inf"]));
    let f = scratch("bad_h.toml", "group = \"C4\"\nH = \"tau\"\n");
    assert_eq!(qmrat(&["decide", &f]).status.code(), Some(3));
    let f = scratch("square.toml", "group = \"C2_2\"\nH = \"1\"\n[params]\na = 4\nb = 3\n");
    assert_eq!(qmrat(&["decide", &f]).status.code(), Some(3));
    let f = scratch("pending.toml", "group = \"S3_1\"\nH = \"1\"\n[params]\nc = 5\n[field]\nkind = \"general_cubic\"\nm = 5\nalpha = 1\nalpha_sqrt = 2\n");
    let o = qmrat(&["decide", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["verdict"], "undecided");
}

#[test]
fn parse_errors_report_positions() {
    let o = qmrat(&["decide", &instance("bad_syntax.toml")]);
    assert_eq!(o.status.code(), Some(65));
    assert!(json(&o)["error"].as_str().unwrap().contains("bad_syntax.toml:5:5"));
    let f = scratch("unknown_key.toml", "group = \"C4\"\nH = \"1\"\n\n[params]\nq = 1\n");
    let o = qmrat(&["decide", &f]);
    assert_eq!(o.status.code(), Some(65));
    assert!(json(&o)["error"].as_str().unwrap().contains(":5:1:"));
    let f = scratch("bad_rational.toml", "group = \"C4\"\nH = \"1\"\n[params]\nc = \"1/x\"\n");
    assert_eq!(qmrat(&["decide", &f]).status.code(), Some(65));
    assert_eq!(qmrat(&["decide", "/nonexistent/instance.toml"]).status.code(), Some(66));
}

#[test]
fn usage_errors() {
    assert_eq!(qmrat(&[]).status.code(), Some(64));
    assert_eq!(qmrat(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(qmrat(&["symbol", "--deg", "4", "1", "2"]).status.code(), Some(64));
    assert_eq!(qmrat(&["conic", "2"]).status.code(), Some(64));
    assert_eq!(qmrat(&["classify", "[1,2]"]).status.code(), Some(64));
    assert_eq!(qmrat(&["decide", &instance("c4_example.toml"), &instance("c3_omega.toml")]).status.code(), Some(64));
    assert_eq!(qmrat(&["--help"]).status.code(), Some(0));
}

#[test]
fn batch_mode() {
    let files: Vec<String> =
        ["c4_example.toml", "c2_2_obstructed.toml", "c3_omega.toml", "d4_octic.toml"].iter().map(|f| instance(f)).collect();
    let mut args = vec!["decide", "--batch", "--json-only"];
    args.extend(files.iter().map(String::as_str));
    let o = qmrat(&args);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let verdicts: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["rational", "not_rational", "rational", "not_rational"]);
}

#[test]
fn seed_changes_search_not_verdict() {
    let base = json(&qmrat(&["decide", &instance("d4_octic.toml"), "--json-only"]));
    for seed in ["1", "2", "99"] {
        let v = json(&qmrat(&["decide", &instance("d4_octic.toml"), "--json-only", "--seed", seed]));
        assert_eq!(v["verdict"], base["verdict"]);
        assert_eq!(v["clause"], base["clause"]);
    }
}

#[test]
fn conic_and_symbol() {
    let o = qmrat(&["conic", "2", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["point"], serde_json::json!([3, 1, 1]));
    let o = qmrat(&["conic", "3", "5"]);
    assert_eq!((o.status.code(), json(&o)["point"].is_null()), (Some(1), true));

    let v = json(&qmrat(&["symbol", "--deg", "2", "-1", "-1"]));
    assert_eq!(v["value"], "nonzero");
    let v = json(&qmrat(&["symbol", "--deg", "2", "-1", "-1", "--ext", "-1"]));
    assert_eq!(v["value"], "zero");
    let v = json(&qmrat(&["symbol", "--deg", "3", "2", "3"]));
    assert_eq!(v["value"], "zero");
    assert!(v["witness"]["norm"].is_object());
    let o = qmrat(&["symbol", "--deg", "3", "2", "5", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["value"], "undecided");
}

#[test]
fn classify_conjugated_group() {
    // P = [[2, 1], [1, 1]] applied to the D4 generators sigma and tau
    let o = qmrat(&["classify", "[[3,-5,2,-3],[-1,3,0,1]]", "--json-only"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["label"], "D4");
    assert_eq!(v["order"], 8);
    assert_eq!(v["normal_subgroups"].as_array().unwrap().len(), 6);
    assert_eq!(qmrat(&["classify", "[1,1,0,1]"]).status.code(), Some(3));
}

#[test]
fn verification_commands() {
    let o = qmrat(&["verify-case", "d6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["detail"].as_array().unwrap().len(), v["checks"].as_u64().unwrap() as usize);
    assert!(String::from_utf8_lossy(&o.stderr).lines().all(|l| l.starts_with("PASS")));
    assert_eq!(qmrat(&["verify-case", "no/such/tag"]).status.code(), Some(3));

    let o = qmrat(&["verify-all", "--json-only"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed_checks"], v["total_checks"]);
    assert_eq!(v["cases"].as_array().unwrap().len(), qmrat::fixedfield::case_tags().len());
}

#[test]
fn dim1() {
    let o = qmrat(&["dim1", "2", "-1"]);
    assert_eq!((o.status.code(), json(&o)["verdict"].as_str()), (Some(0), Some("rational")));
    let o = qmrat(&["dim1", "-1", "-1"]);
    assert_eq!((o.status.code(), json(&o)["verdict"].as_str()), (Some(1), Some("not_rational")));
    assert_eq!(qmrat(&["dim1", "0", "1"]).status.code(), Some(3));
}
