use drw2::cli::{main_entry, run, Command, Format, RunConfig, RunOutput, Row, Status};
use serde_json::Value;
use std::path::PathBuf;

fn cfg(json: &str) -> RunConfig {
    RunConfig::from_json_str(json).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("drw2-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn axioms_report_is_json_and_clean() {
    let c = cfg(r#"{"field":{"e":1,"d":1},"seed":7,"trials":1000,"n_max":2,"q_max":1,"format":"json"}"#);
    let out = run(&Command::Axioms, &c).unwrap();
    assert!(!out.failed());
    let v: Value = serde_json::from_str(&out.render(Format::Json)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["data"]["trials"], 1000);
    assert!(v["data"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn bredon_and_witt_table_text() {
    let c = RunConfig::default();
    let b = run(&Command::Bredon { n: Some(1) }, &c).unwrap().render(Format::Text);
    assert!(b.contains("H1: 2, H2: 3"), "{b}");
    let w = run(&Command::WittTable { n: Some(1) }, &c).unwrap().render(Format::Text);
    assert!(w.contains("S1 = a1+b1+a0*b0"), "{w}");
    assert!(w.contains("P1 = a0^2*b1+a1*b0^2"), "{w}");
}

#[test]
fn outputs_are_byte_deterministic() {
    let c = cfg(r#"{"field":{"e":2,"d":2,"names":["t","u"]},"seed":3,"trials":25,"n_max":2,"q_max":2}"#);
    for cmd in [Command::Axioms, Command::DrwIso, Command::Trace { matrix: None }, Command::Trr, Command::FieldInfo] {
        for f in [Format::Json, Format::Csv] {
            let a = run(&cmd, &c).unwrap().render(f);
            let b = run(&cmd, &c).unwrap().render(f);
            assert_eq!(a, b, "{}", cmd.name());
        }
    }
}

#[test]
fn csv_has_the_documented_columns() {
    let c = cfg(r#"{"field":{"e":1,"d":2},"seed":1,"trials":5}"#);
    let s = run(&Command::WittGroup { elem: vec!["t".into(), "t*u+1".into()] }, &c).unwrap().render(Format::Csv);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("suite,id,status,lhs,rhs,seed"));
    assert!(lines.all(|l| l.starts_with("witt-group,") && (l.ends_with(",1") || l.ends_with(",0"))));
}

#[test]
fn exit_codes() {
    let dir = tmp("exit");
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"field":{"e":1,"d":1},"trials":5,"format":"csv"}"#).unwrap();
    let caps = dir.join("caps.json");
    std::fs::write(&caps, r#"{"field":{"e":1,"d":1},"q_max":2}"#).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"field":{"e":1,"d":1},"seed":"x"}"#).unwrap();
    let arg = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert_eq!(main_entry(["drw2", "--config", &arg(&good), "trace"]), 0);
    assert_eq!(main_entry(["drw2", "--config", &arg(&caps), "bredon"]), 2);
    assert_eq!(main_entry(["drw2", "--config", &arg(&bad), "bredon"]), 2);
    assert_eq!(main_entry(["drw2", "frobnicate"]), 2);
    assert_eq!(main_entry(["drw2", "witt-group", "--elem", "0"]), 2);

    let failing = RunOutput {
        command: "x".into(),
        seed: 0,
        rows: vec![Row { suite: "x".into(), id: "a".into(), status: Status::Fail, lhs: "1".into(), rhs: "0".into(), seed: 0 }],
        data: Value::Null,
        warnings: vec![],
        text: String::new(),
    };
    assert!(failing.failed());
}

#[test]
fn unresolved_goes_to_the_warning_file() {
    let dir = tmp("warn");
    let conf = dir.join("c.json");
    let out_dir = dir.join("out");
    std::fs::write(
        &conf,
        format!(r#"{{"field":{{"e":1,"d":1}},"trials":3,"degree_bound":1,"format":"json","out_dir":{:?}}}"#, out_dir.to_str().unwrap()),
    )
    .unwrap();
    let code = main_entry(["drw2", "--config", conf.to_str().unwrap(), "tcr", "--tensor", "t,t"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("tcr.json")).unwrap()).unwrap();
    assert_eq!(report["data"]["cokernel"]["outcome"], "unresolved");
    let warn = std::fs::read_to_string(out_dir.join("tcr.warnings.txt")).unwrap();
    assert!(warn.contains("unresolved at bound 1"));
}

#[test]
fn trace_reads_matrix_files() {
    let dir = tmp("trace");
    let m = dir.join("m.json");
    std::fs::write(&m, r#"[["t","1"],["1","t+1"]]"#).unwrap();
    let c = cfg(r#"{"field":{"e":1,"d":1}}"#);
    let out = run(&Command::Trace { matrix: Some(m) }, &c).unwrap();
    assert!(!out.failed());
    let id = dir.join("id.json");
    std::fs::write(&id, r#"[["1","0"],["0","1"]]"#).unwrap();
    let out = run(&Command::Trace { matrix: Some(id) }, &c).unwrap();
    assert_eq!(out.data["display"], "0");
}
