use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gwcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwcheck"))
        .args(args)
        .output()
        .expect("spawn gwcheck")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_prints_grading() {
    let o = gwcheck(&["validate", "builtin:p2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("b = (-1/2, 1/2, 3/2)"));
}

#[test]
fn validate_rejects_bad_models() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("skew.json");
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/models/p2.json"
    ))
    .unwrap()
    .replace("[1, 2, 2, 1]", "[1, 2, 2, 1], [2, 1, 2, 2]");
    std::fs::write(&model, text).unwrap();
    let o = gwcheck(&["validate", path_str(&model)]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&gwcheck(&["validate", "/does/not/exist.json"])), 2);
    assert_eq!(code(&gwcheck(&["validate", "builtin:p7"])), 2);
}

#[test]
fn build_p1_artifact_and_reuse() {
    let dir = TempDir::new().unwrap();
    let artifact = dir.path().join("p1.json");
    let o = gwcheck(&[
        "build",
        "--model",
        "builtin:p1",
        "--out",
        path_str(&artifact),
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&artifact).unwrap()).unwrap();
    assert!(doc["f1"].as_str().unwrap().ends_with("[0,1|0]:-1/24"));
    assert_eq!(doc["window"], "t<=8,q<=[4]");
    let o = gwcheck(&[
        "check",
        "--potential",
        path_str(&artifact),
        "--checks",
        "main_theorem,lemma",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("3/3 checks passed"));
}

#[test]
fn build_point_with_empty_table() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("empty.json");
    std::fs::write(&table, "[]").unwrap();
    let o = gwcheck(&[
        "build",
        "--model",
        "builtin:point",
        "--table",
        path_str(&table),
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["table"], Value::Array(vec![]));
}

#[test]
fn build_reports_conflicting_entries() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("t.json");
    std::fs::write(
        &table,
        r#"[{"g":0,"beta":[1],"insertions":[2,2],"value":1},
            {"g":0,"beta":[1],"insertions":[2,2,2],"value":"3/2"}]"#,
    )
    .unwrap();
    let o = gwcheck(&[
        "build",
        "--model",
        "builtin:p1",
        "--table",
        path_str(&table),
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("value=3/2"));
}

#[test]
fn solve_genus1_writes_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g1.json");
    let o = gwcheck(&["solve-genus1", "--d-max", "3", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let table: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let last = &table.as_array().unwrap()[2];
    assert_eq!(last["beta"][0], 3);
    assert_eq!(last["value"], 1);
    let o = gwcheck(&["solve-genus1", "--d-max", "0"]);
    assert_eq!(stdout(&o), "[]\n");
}

#[test]
fn solve_genus1_needs_rank_one() {
    assert_eq!(
        code(&gwcheck(&[
            "solve-genus1",
            "--model",
            "builtin:point",
            "--d-max",
            "1"
        ])),
        1
    );
}

#[test]
fn solved_tables_feed_back_into_check() {
    let dir = TempDir::new().unwrap();
    let g1 = dir.path().join("g1.json");
    assert_eq!(
        code(&gwcheck(&[
            "solve-genus1",
            "--d-max",
            "3",
            "--out",
            path_str(&g1)
        ])),
        0
    );
    let g0 = dir.path().join("g0.json");
    std::fs::write(
        &g0,
        r#"[{"g":0,"beta":[1],"insertions":[3,3],"value":1},
            {"g":0,"beta":[2],"insertions":[3,3,3,3,3],"value":1},
            {"g":0,"beta":[3],"insertions":[3,3,3,3,3,3,3,3],"value":12}]"#,
    )
    .unwrap();
    let o = gwcheck(&[
        "check",
        "--table",
        path_str(&g0),
        "--table",
        path_str(&g1),
        "--d-max",
        "3",
        "--checks",
        "getzler_residual,main_theorem,virasoro_small",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn check_failure_shows_first_monomial() {
    let dir = TempDir::new().unwrap();
    let g0 = dir.path().join("g0.json");
    std::fs::write(
        &g0,
        r#"[{"g":0,"beta":[1],"insertions":[3,3],"value":1},
            {"g":0,"beta":[2],"insertions":[3,3,3,3,3],"value":2}]"#,
    )
    .unwrap();
    let o = gwcheck(&[
        "check",
        "--table",
        path_str(&g0),
        "--d-max",
        "2",
        "--checks",
        "wdvv",
    ]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.starts_with("FAIL wdvv"));
    assert!(
        text.contains("first failing monomial: ") && text.contains("|2]"),
        "{text}"
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        code(&gwcheck(&[
            "check",
            "--model",
            "builtin:point",
            "--checks",
            "bogus"
        ])),
        2
    );
    assert_eq!(
        code(&gwcheck(&[
            "check",
            "--model",
            "builtin:point",
            "--t-max",
            "2"
        ])),
        2
    );
    assert_eq!(code(&gwcheck(&["check", "--format", "yaml"])), 2);
    assert_eq!(code(&gwcheck(&["frobnicate"])), 2);
}

#[test]
fn json_lines_are_sorted_and_untimed() {
    let o = gwcheck(&["check", "--model", "builtin:point", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o)
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            assert!(v["millis"].is_null());
            v["name"].as_str().unwrap().to_string()
        })
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), gwcore::virasoro::CHECK_NAMES.len());
    let timed = gwcheck(&[
        "check",
        "--model",
        "builtin:point",
        "--checks",
        "wdvv",
        "--format",
        "json",
        "--timings",
    ]);
    let v: Value = serde_json::from_str(stdout(&timed).trim()).unwrap();
    assert!(v["millis"].is_u64());
}
