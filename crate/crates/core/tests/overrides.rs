use std::io::Write;
use std::process::{Command, Output};

use sarkisov_core::tables::Tables;
use sarkisov_core::Error;

const BIN: &str = env!("CARGO_BIN_EXE_sarkisov");

fn tables_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], env: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("SARKISOV_TABLES");
    if let Some(p) = env {
        cmd.env("SARKISOV_TABLES", p);
    }
    cmd.output().unwrap()
}

const RENAMED_CITATION: &str = r#"{"cited_links": [
    {"id": 1, "citation": "override one"}, {"id": 2, "citation": "x"}, {"id": 3, "citation": "x"},
    {"id": 4, "citation": "x"}, {"id": 5, "citation": "x"}, {"id": 6, "citation": "x"},
    {"id": 8, "citation": "x"}, {"id": 9, "citation": "x"}, {"id": 10, "citation": "x"},
    {"id": 12, "citation": "x"}, {"id": 15, "citation": "x"}, {"id": 16, "citation": "x"},
    {"id": 17, "citation": "x"}]}"#;

#[test]
fn override_file_replaces_citations() {
    let f = tables_file(RENAMED_CITATION);
    let path = f.path().to_str().unwrap();
    let out = run(&["classify", "--tables", path], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("\"citation\":\"override one\""));

    let builtin = run(&["classify"], None);
    let a: serde_json::Value = serde_json::from_str(&s).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&builtin.stdout).unwrap();
    assert_ne!(a["meta"]["dataset_hash"], b["meta"]["dataset_hash"]);
}

#[test]
fn flag_wins_over_environment() {
    let good = tables_file(RENAMED_CITATION);
    let bad = tables_file("{not json");
    let good_path = good.path().to_str().unwrap();
    let bad_path = bad.path().to_str().unwrap();

    let out = run(&["tables"], Some(bad_path));
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["tables", "--tables", good_path], Some(bad_path));
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["tables"], Some(good_path));
    assert!(String::from_utf8_lossy(&out.stdout).contains("override one"));
}

#[test]
fn malformed_files_report_location() {
    let cases = [
        (
            "{\n  \"fano_rows\": [\n    {\"d\": 2, \"index\": 1}\n  ]\n}",
            "line 3",
        ),
        (
            r#"{"fano_rows": [{"d": 3, "index": 1, "h12": 0}]}"#,
            "fano_rows[0]",
        ),
        (
            r#"{"cited_links": [{"id": 18, "citation": "x"}]}"#,
            "cited_links[0].id",
        ),
        (r#"{"extra": []}"#, "extra"),
    ];
    for (body, needle) in cases {
        let f = tables_file(body);
        let err = Tables::load(f.path()).unwrap_err();
        assert!(matches!(err, Error::Tables(_)), "{body}: {err:?}");
        assert!(err.to_string().contains(needle), "{body}: {err}");

        let out = run(&["classify", "--tables", f.path().to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(needle));
    }
}

#[test]
fn override_that_breaks_an_anchor_exits_one() {
    // Dropping P^3 removes the data of links 11 and 13.
    let f = tables_file(
        r#"{"fano_rows": [{"d": 22, "index": 1, "h12": 0}, {"d": 54, "index": 3, "h12": 0}]}"#,
    );
    let path = f.path().to_str().unwrap();
    assert_eq!(
        run(&["classify", "--tables", path], None).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["diamond", "--tables", path], None).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["tables", "--tables", path], None).status.code(),
        Some(0)
    );
}
