use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sarkisov");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("SARKISOV_TABLES")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn classify_matches_golden_files() {
    assert_eq!(stdout(&["classify"]), golden("classify.json"));
    assert_eq!(
        stdout(&["classify", "--format", "md"]),
        golden("classify.md")
    );
    assert_eq!(
        stdout(&["classify", "--format", "csv"]),
        golden("classify.csv")
    );
}

#[test]
fn classify_is_deterministic() {
    let a = stdout(&["classify", "--trail"]);
    let b = stdout(&["classify", "--trail"]);
    let serial = stdout(&["classify", "--trail", "--serial"]);
    assert_eq!(a, b);
    assert_eq!(a, serial);
}

#[test]
fn classify_json_round_trips() {
    let s = stdout(&["classify"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string(&v).unwrap()), s);
    let links = v["links"].as_array().unwrap();
    assert_eq!(links.len(), 17);
    assert_eq!(links[13]["errata"][0], "source prints (3,4); derived (2,3)");
    assert_eq!(links[6]["a"], "1");
    assert_eq!(v["meta"]["bounds"]["g_max"], 20);
}

#[test]
fn csv_has_header_plus_seventeen_lines() {
    assert_eq!(stdout(&["classify", "--format", "csv"]).lines().count(), 18);
}

#[test]
fn diamond_and_solve() {
    assert_eq!(stdout(&["diamond"]), golden("diamond.json"));
    assert_eq!(
        stdout(&["solve", "--d", "14", "--d1", "5", "--rhs-q", "2", "--rhs-l", "7"]),
        "[[\"0\",\"-1\"],[\"1\",\"1\"]]\n"
    );
    assert_eq!(
        stdout(&[
            "solve", "--d", "18", "--d1", "4", "--rhs-q", "2", "--rhs-l", "22", "--format", "csv"
        ]),
        "a,b\n3,4\n"
    );
    // negative right-hand sides parse as numbers, not flags
    assert_eq!(
        stdout(&["solve", "--d", "22", "--d1", "3", "--rhs-q", "-2", "--rhs-l", "17"]),
        "[[\"2\",\"3\"]]\n"
    );
}

#[test]
fn case_subcommands_succeed() {
    for case in ["conic-point", "conic-curve", "conic-conic", "birational"] {
        let s = stdout(&["case", case]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["case"], case);
    }
    let s = stdout(&["case", "conic-point", "--trail"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["trail"].as_array().unwrap().len(), 18);
    assert!(v["candidates"].as_array().unwrap().is_empty());
}

#[test]
fn lattice_and_tables() {
    let s = stdout(&["lattice", "--format", "csv"]);
    assert!(s.lines().skip(1).all(|l| l.contains(",true,")), "{s}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&["tables"])).unwrap();
    assert_eq!(v["fano_rows"].as_array().unwrap().len(), 17);
    assert_eq!(v["cited_links"].as_array().unwrap().len(), 13);
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["bogus"][..],
        &["classify", "--nope"],
        &["classify", "--format", "xml"],
        &["solve", "--d", "14"],
        &[
            "solve", "--d", "14", "--d1", "1", "--rhs-q", "2", "--rhs-l", "7",
        ],
        &[
            "solve", "--d", "14", "--d1", "0", "--rhs-q", "2", "--rhs-l", "7",
        ],
        &[
            "solve", "--d", "8", "--d1", "8", "--rhs-q", "2", "--rhs-l", "4",
        ],
        &["case", "birational", "--g-max", "100000"],
        &["case", "birational", "--dc-max", "0"],
        &["classify", "--tables", "/nonexistent/tables.json"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_succeeds() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("classify"));
}

#[test]
fn narrow_bounds_lose_link_thirteen() {
    let out = run(&["classify", "--g-max", "0", "--dc-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("link 13"));
}
