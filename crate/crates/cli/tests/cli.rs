use std::path::PathBuf;
use std::process::{Command, Output};

fn system(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/systems")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cbvtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbvtc"))
        .args(args)
        .env("CBVTC_COLOR", "never")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cbvtc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn interpret_partial_addition() {
    let o = cbvtc(&["interpret", &system("add.trs"), &system("add.csint"), "add (add 2 3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "⟨(4, λλy. (y.2, u)), λλy. 7 + y⟩\n");
}

#[test]
fn interpret_with_bignum() {
    let o = cbvtc(&["--bignum", "interpret", &system("map.trs"), &system("map.csint"), "[1; 7; 9]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "⟨(0, u), (3, 10)⟩\n");
}

#[test]
fn verify_bundled_systems() {
    for (trs, csint) in [("add.trs", "add.csint"), ("map.trs", "map.csint")] {
        let o = cbvtc(&["verify", &system(trs), &system(csint)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let out = stdout(&o);
        assert!(out.starts_with("kind\tindex\titem\tresult\tdetail\n"));
        assert!(!out.contains("FAILS"));
    }
}

#[test]
fn verify_reports_a_failing_rule_with_exit_1() {
    let text = std::fs::read_to_string(system("add.csint"))
        .unwrap()
        .replace("\\y. (y.2, u)", "\\y. (0, u)");
    let csint = temp("zero.csint", &text);
    let o = cbvtc(&["verify", &system("add.trs"), &csint]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("rule\t1\tadd x 0 => x\tFAILS\tat cost number: 0 vs 0 under {x ↦ 0}"), "{out}");
}

#[test]
fn dh_of_zero() {
    let o = cbvtc(&["dh", &system("add.trs"), "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
    let o = cbvtc(&["dh", &system("add.trs"), "add 0 (add 0 0)"]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn eval_prints_normal_form_and_steps() {
    let o = cbvtc(&["eval", &system("add.trs"), "add 2 3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "5\nsteps: 4\n");
}

#[test]
fn eval_out_of_fuel_exits_1() {
    let o = cbvtc(&["eval", &system("add.trs"), "add 9 9", "--fuel", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fuel exhausted"));
}

#[test]
fn check_reports_positions() {
    let bad = temp("bad.trs", "type nat\ncons 0 : nat\nfun f : nat -> nat\nrule f x => y\n");
    let o = cbvtc(&["check", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.trs:4:1: pattern error"), "{}", stderr(&o));
    let o = cbvtc(&["check", &system("map.trs")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "ok: 2 base types, 6 symbols (2 defined, 4 constructors), 4 rules\n"
    );
}

#[test]
fn bad_term_and_usage_exit_2() {
    let o = cbvtc(&["dh", &system("add.trs"), "add (0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("<term>:1:7: syntax error"), "{}", stderr(&o));
    assert_eq!(cbvtc(&["verify"]).status.code(), Some(2));
    assert_eq!(cbvtc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cbvtc(&["check", "/no/such/file.trs"]).status.code(), Some(2));
    let o = cbvtc(&["verify", &system("add.trs"), &system("add.csint"), "--grid", "nats="]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn harness_is_deterministic_and_writes_json() {
    let out = temp("report.json", "");
    let args = [
        "harness",
        &system("map.trs"),
        &system("map.csint"),
        "add (add 2 3)",
        "--gen",
        "12",
        "40",
        "--seed",
        "9",
        "--out",
        &out,
    ];
    let a = cbvtc(&args);
    let b = cbvtc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("# 41 terms, 0 violations, 0 errors\n"));
    assert!(stdout(&a).contains("term\t1\tadd (add 2 3)\tok\tdh=4 bound=4 gap=0\n"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["terms"].as_array().unwrap().len(), 41);
    assert_eq!(json["terms"][0]["dh"], 4);
}

#[test]
fn color_is_applied_only_when_asked() {
    let run = |mode: &str| {
        Command::new(env!("CARGO_BIN_EXE_cbvtc"))
            .args(["verify", &system("add.trs"), &system("add.csint")])
            .env("CBVTC_COLOR", mode)
            .output()
            .unwrap()
    };
    assert!(stdout(&run("always")).contains("\x1b[32m"));
    assert!(!stdout(&run("never")).contains('\x1b'));
    assert_eq!(run("sometimes").status.code(), Some(2));
}
