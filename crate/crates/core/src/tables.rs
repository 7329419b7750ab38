//! Static numerical datasets: invariants of smooth Fano threefolds of Picard
//! rank one, Mori point-contraction intersection data, and the cited
//! del Pezzo fibration links.
//!
//! The compiled-in data can be replaced by a JSON override file:
//!
//! ```json
//! {"fano_rows": [{"d": 22, "index": 1, "h12": 0}],
//!  "cited_links": [{"id": 16, "citation": "...", "d": 40, "index": 2}]}
//! ```
//!
//! Either array may be omitted, in which case the compiled-in array is kept.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Anticanonical degree, Fano index and `h^{1,2}` of a smooth rank-one Fano threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FanoNumerics {
    pub d: i64,
    pub index: i64,
    pub h12: i64,
}

impl FanoNumerics {
    pub const fn new(d: i64, index: i64, h12: i64) -> Self {
        Self { d, index, h12 }
    }

    fn sort_key(&self) -> (i64, i64) {
        (self.index, self.d)
    }
}

impl PartialOrd for FanoNumerics {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FanoNumerics {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.h12.cmp(&other.h12))
    }
}

impl std::fmt::Display for FanoNumerics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.d, self.index, self.h12)
    }
}

const FANO_ROWS: [FanoNumerics; 17] = [
    FanoNumerics::new(2, 1, 52),
    FanoNumerics::new(4, 1, 30),
    FanoNumerics::new(6, 1, 20),
    FanoNumerics::new(8, 1, 14),
    FanoNumerics::new(10, 1, 10),
    FanoNumerics::new(12, 1, 7),
    FanoNumerics::new(14, 1, 5),
    FanoNumerics::new(16, 1, 3),
    FanoNumerics::new(18, 1, 2),
    FanoNumerics::new(22, 1, 0),
    FanoNumerics::new(8, 2, 21),
    FanoNumerics::new(16, 2, 10),
    FanoNumerics::new(24, 2, 5),
    FanoNumerics::new(32, 2, 2),
    FanoNumerics::new(40, 2, 0),
    FanoNumerics::new(54, 3, 0),
    FanoNumerics::new(64, 4, 0),
];

/// Mori's three divisor-to-point contractions from a smooth threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointContractionKind {
    /// `D = P^2` with normal bundle `O(-1)`.
    A,
    /// `D = P^2` with normal bundle `O(-2)`.
    B,
    /// `D` an irreducible quadric surface with normal bundle `O(-1)`.
    C,
}

impl PointContractionKind {
    pub const ALL: [PointContractionKind; 3] = [Self::A, Self::B, Self::C];

    /// `-K · D^2`.
    pub const fn k_d2_squared(self) -> i64 {
        -2
    }

    /// `(-K)^2 · D`.
    pub const fn k2_d2(self) -> i64 {
        match self {
            Self::A => 4,
            Self::B => 1,
            Self::C => 2,
        }
    }
}

impl std::fmt::Display for PointContractionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
        };
        f.write_str(s)
    }
}

/// A link whose classification comes from an external reference rather than
/// from a derivation in this crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CitedLinkRow {
    pub link_id: u8,
    pub citation: String,
    /// Anticanonical degree, when known for this link.
    pub d: Option<i64>,
    pub index: Option<i64>,
}

const TAKEUCHI: &str = "del Pezzo fibration link; Takeuchi 2022";

fn builtin_cited() -> Vec<CitedLinkRow> {
    let row = |id: u8, citation: &str, d: Option<i64>, index: Option<i64>| CitedLinkRow {
        link_id: id,
        citation: citation.to_string(),
        d,
        index,
    };
    vec![
        row(
            1,
            "del Pezzo fibrations of degree 1 on both sides; Takeuchi 2022, Jahnke-Radloff 2006",
            Some(2),
            Some(1),
        ),
        row(2, TAKEUCHI, None, None),
        row(3, TAKEUCHI, None, None),
        row(4, TAKEUCHI, None, None),
        row(5, TAKEUCHI, None, None),
        row(6, TAKEUCHI, None, None),
        row(8, TAKEUCHI, None, None),
        row(9, TAKEUCHI, None, None),
        row(10, TAKEUCHI, None, None),
        row(12, TAKEUCHI, None, None),
        row(
            15,
            "del Pezzo fibration of degree 6; Fukuoka 2017, Fukuoka 2019",
            None,
            None,
        ),
        row(
            16,
            "quintic del Pezzo threefold; Takeuchi 2022",
            Some(40),
            Some(2),
        ),
        row(
            17,
            "nodal quadric threefold in P^4; Takeuchi 2022",
            Some(54),
            Some(3),
        ),
    ]
}

/// The loaded datasets. Immutable once constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    fano_rows: Vec<FanoNumerics>,
    cited_links: Vec<CitedLinkRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TablesFile {
    #[serde(default)]
    fano_rows: Option<Vec<FanoRowFile>>,
    #[serde(default)]
    cited_links: Option<Vec<CitedLinkFile>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanoRowFile {
    d: i64,
    index: i64,
    h12: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CitedLinkFile {
    id: i64,
    citation: String,
    #[serde(default)]
    d: Option<i64>,
    #[serde(default)]
    index: Option<i64>,
}

impl Default for Tables {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Tables {
    pub fn builtin() -> Self {
        let mut fano_rows = FANO_ROWS.to_vec();
        fano_rows.sort();
        Self {
            fano_rows,
            cited_links: builtin_cited(),
        }
    }

    /// Builds tables from explicit rows, validating every dataset invariant.
    pub fn new(
        mut fano_rows: Vec<FanoNumerics>,
        mut cited_links: Vec<CitedLinkRow>,
    ) -> Result<Self> {
        validate_rows(&fano_rows)?;
        validate_cited(&cited_links)?;
        fano_rows.sort();
        cited_links.sort_by_key(|c| c.link_id);
        Ok(Self {
            fano_rows,
            cited_links,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: TablesFile =
            serde_json::from_str(text).map_err(|e| Error::Tables(e.to_string()))?;
        let builtin = Self::builtin();
        let fano_rows = match file.fano_rows {
            Some(rows) => rows
                .into_iter()
                .map(|r| FanoNumerics::new(r.d, r.index, r.h12))
                .collect(),
            None => builtin.fano_rows,
        };
        let cited_links = match file.cited_links {
            Some(rows) => rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    let link_id = u8::try_from(r.id)
                        .ok()
                        .filter(|id| (1..=17).contains(id))
                        .ok_or_else(|| {
                            Error::Tables(format!("cited_links[{i}].id: {} not in 1..=17", r.id))
                        })?;
                    Ok(CitedLinkRow {
                        link_id,
                        citation: r.citation,
                        d: r.d,
                        index: r.index,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            None => builtin.cited_links,
        };
        Self::new(fano_rows, cited_links)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Tables(msg) => Error::Tables(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// All rows, ordered by `(index, d)`.
    pub fn master_table(&self) -> &[FanoNumerics] {
        &self.fano_rows
    }

    pub fn cited_links(&self) -> &[CitedLinkRow] {
        &self.cited_links
    }

    pub fn h12_values(&self, index_filter: Option<i64>) -> BTreeSet<i64> {
        self.fano_rows
            .iter()
            .filter(|r| index_filter.is_none_or(|i| r.index == i))
            .map(|r| r.h12)
            .collect()
    }

    pub fn lookup_by_h12(&self, h12: i64) -> Vec<FanoNumerics> {
        self.fano_rows
            .iter()
            .copied()
            .filter(|r| r.h12 == h12)
            .collect()
    }

    pub fn row(&self, d: i64, index: i64) -> Option<FanoNumerics> {
        self.fano_rows
            .iter()
            .copied()
            .find(|r| r.d == d && r.index == index)
    }

    pub fn contains(&self, row: &FanoNumerics) -> bool {
        self.fano_rows.contains(row)
    }

    /// SHA-256 over the canonical JSON encoding of both datasets.
    pub fn dataset_hash(&self) -> String {
        let canonical = serde_json::json!({
            "fano_rows": self.fano_rows,
            "cited_links": self.cited_links,
        });
        let bytes = serde_json::to_vec(&canonical).expect("dataset serializes");
        format!("{:x}", Sha256::digest(&bytes))
    }
}

fn validate_rows(rows: &[FanoNumerics]) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, r) in rows.iter().enumerate() {
        if r.d <= 0 {
            return Err(Error::Tables(format!(
                "fano_rows[{i}].d: must be positive, got {}",
                r.d
            )));
        }
        if r.index < 1 {
            return Err(Error::Tables(format!(
                "fano_rows[{i}].index: must be at least 1, got {}",
                r.index
            )));
        }
        if r.h12 < 0 {
            return Err(Error::Tables(format!(
                "fano_rows[{i}].h12: must be non-negative, got {}",
                r.h12
            )));
        }
        if r.index % 2 == 1 && r.d % 2 != 0 {
            return Err(Error::Tables(format!(
                "fano_rows[{i}].d: odd degree {} with odd index {}",
                r.d, r.index
            )));
        }
        if !seen.insert((r.d, r.index)) {
            return Err(Error::Tables(format!(
                "fano_rows[{i}]: duplicate (d, index) = ({}, {})",
                r.d, r.index
            )));
        }
    }
    Ok(())
}

fn validate_cited(rows: &[CitedLinkRow]) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, r) in rows.iter().enumerate() {
        if !(1..=17).contains(&r.link_id) {
            return Err(Error::Tables(format!(
                "cited_links[{i}].id: {} not in 1..=17",
                r.link_id
            )));
        }
        if !seen.insert(r.link_id) {
            return Err(Error::Tables(format!(
                "cited_links[{i}].id: duplicate id {}",
                r.link_id
            )));
        }
        if r.citation.trim().is_empty() {
            return Err(Error::Tables(format!("cited_links[{i}].citation: empty")));
        }
    }
    Ok(())
}

/// The compiled-in master table.
pub fn master_table() -> Vec<FanoNumerics> {
    Tables::builtin().fano_rows
}

pub fn h12_values(index_filter: Option<i64>) -> BTreeSet<i64> {
    Tables::builtin().h12_values(index_filter)
}

pub fn lookup_by_h12(h12: i64) -> Vec<FanoNumerics> {
    Tables::builtin().lookup_by_h12(h12)
}
