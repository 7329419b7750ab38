//! Report rows and their JSON / Markdown / CSV renderings.
//!
//! JSON output is canonical: object keys sorted, no insignificant whitespace.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cases::{SearchBounds, TrailStep};
use crate::error::{Error, Result};
use crate::solver::SolutionPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Derived,
    Cited,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Derived => "derived",
            Self::Cited => "cited",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub link_id: u8,
    pub status: RowStatus,
    pub d: Option<i64>,
    pub index: Option<i64>,
    pub h12: Option<i64>,
    pub left: String,
    pub right: String,
    pub solution: Option<SolutionPair>,
    pub errata: Vec<String>,
    pub citation: Option<String>,
    pub trail: Vec<TrailStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Format {
    #[default]
    Json,
    Markdown,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "md" | "markdown" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// Run metadata carried in the JSON report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportMeta {
    pub dataset_hash: String,
    pub bounds: SearchBounds,
}

/// Header plus string cells; the common shape behind Markdown and CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        out.push_str("| ");
        out.push_str(
            &self
                .headers
                .iter()
                .map(|h| esc(h))
                .collect::<Vec<_>>()
                .join(" | "),
        );
        out.push_str(" |\n|");
        out.push_str(&vec!["---|"; self.headers.len()].concat());
        out.push('\n');
        for row in &self.rows {
            out.push_str("| ");
            out.push_str(&row.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
            out.push_str(" |\n");
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let to_err = |e: csv::Error| Error::Inconsistency(format!("csv: {e}"));
        w.write_record(&self.headers).map_err(to_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(to_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Inconsistency(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Inconsistency(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Markdown => Ok(self.to_markdown()),
            Format::Csv => self.to_csv(),
            Format::Json => Err(Error::InvalidArgument("TextTable has no JSON form".into())),
        }
    }
}

/// Compact JSON with sorted keys.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is a BTreeMap, so a round trip through Value
    // sorts every object's keys.
    let v = serde_json::to_value(value).map_err(|e| Error::Inconsistency(e.to_string()))?;
    let mut s = serde_json::to_string(&v).map_err(|e| Error::Inconsistency(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt_cell(v: Option<i64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn row_json(row: &ReportRow, with_trail: bool) -> Value {
    let mut v = json!({
        "id": row.link_id,
        "status": row.status,
        "d": row.d,
        "index": row.index,
        "h12": row.h12,
        "left": row.left,
        "right": row.right,
        "a": row.solution.as_ref().map(|s| s.a.to_string()),
        "b": row.solution.as_ref().map(|s| s.b.to_string()),
        "errata": row.errata,
        "citation": row.citation,
    });
    if with_trail {
        v["trail"] = serde_json::to_value(&row.trail).expect("trail serializes");
    }
    v
}

pub fn report_table(rows: &[ReportRow]) -> TextTable {
    let mut t = TextTable::new([
        "link", "status", "d", "I", "h12", "left", "right", "(a,b)", "errata",
    ]);
    for r in rows {
        t.push([
            r.link_id.to_string(),
            r.status.to_string(),
            opt_cell(r.d),
            opt_cell(r.index),
            opt_cell(r.h12),
            r.left.clone(),
            r.right.clone(),
            r.solution
                .as_ref()
                .map_or_else(|| "-".to_string(), ToString::to_string),
            r.errata.join(" | "),
        ]);
    }
    t
}

/// Renders the classification report. Output is a pure function of the inputs.
pub fn emit_report(
    rows: &[ReportRow],
    format: Format,
    meta: &ReportMeta,
    with_trail: bool,
) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        Format::Json => {
            let links: Vec<Value> = rows.iter().map(|r| row_json(r, with_trail)).collect();
            canonical_json(&json!({
                "links": links,
                "meta": {
                    "dataset_hash": meta.dataset_hash,
                    "bounds": {"g_max": meta.bounds.g_max, "dc_max": meta.bounds.dc_max},
                },
            }))
        }
        Format::Markdown => {
            let mut out = report_table(rows).to_markdown();
            if with_trail {
                out.push_str(&trail_markdown(rows));
            }
            Ok(out)
        }
        Format::Csv => report_table(rows).to_csv(),
    }
}

fn trail_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    for r in rows.iter().filter(|r| !r.trail.is_empty()) {
        out.push_str(&format!("\n### link {}\n\n", r.link_id));
        for step in &r.trail {
            out.push_str(&format!("- {}\n", step.text));
            for c in &step.checks {
                out.push_str(&format!("  - {c}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: u8) -> ReportRow {
        ReportRow {
            link_id: id,
            status: RowStatus::Derived,
            d: Some(22),
            index: Some(1),
            h12: Some(0),
            left: "conic bundle over P^2, d1=3".into(),
            right: "blow-up".into(),
            solution: Some(SolutionPair::ints(2, 3)),
            errata: vec!["source prints (3,4); derived (2,3)".into()],
            citation: None,
            trail: vec![TrailStep::new("step").check("22a - 9b = 17")],
        }
    }

    fn meta() -> ReportMeta {
        ReportMeta {
            dataset_hash: "abc".into(),
            bounds: SearchBounds::default(),
        }
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(matches!(
            emit_report(&[], Format::Json, &meta(), false),
            Err(Error::EmptyReport)
        ));
    }

    #[test]
    fn json_is_canonical() {
        let s = emit_report(&[row(14)], Format::Json, &meta(), false).unwrap();
        assert!(s.starts_with(r#"{"links":[{"a":"2","b":"3","citation":null,"d":22,"errata":["#));
        assert!(!s.trim_end().contains('\n') && !s.contains(": "));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(canonical_json(&v).unwrap(), s);
        assert!(!s.contains("trail"));
        let with = emit_report(&[row(14)], Format::Json, &meta(), true).unwrap();
        assert!(with.contains(r#""trail":[{"checks":["22a - 9b = 17"],"text":"step"}]"#));
    }

    #[test]
    fn csv_quotes_commas() {
        let s = emit_report(&[row(14), row(7)], Format::Csv, &meta(), false).unwrap();
        assert_eq!(s.lines().count(), 3);
        assert!(s.contains(r#""source prints (3,4); derived (2,3)""#), "{s}");
        assert!(s.starts_with("link,status,d,I,h12,left,right,\"(a,b)\",errata\n"));
    }

    #[test]
    fn markdown_columns() {
        let s = emit_report(&[row(14)], Format::Markdown, &meta(), false).unwrap();
        let header = s.lines().next().unwrap();
        assert_eq!(
            header,
            "| link | status | d | I | h12 | left | right | (a,b) | errata |"
        );
        assert_eq!(
            s.lines().nth(1).unwrap(),
            "|---|---|---|---|---|---|---|---|---|"
        );
        assert!(s.contains("| (2,3) | source prints (3,4); derived (2,3) |"));
    }

    #[test]
    fn formats_parse() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!("xml".parse::<Format>().is_err());
    }
}
