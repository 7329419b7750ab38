//! Assembly of the full 17-row classification from the derived candidates
//! and the cited del Pezzo fibration rows.

use std::collections::BTreeSet;

use crate::cases::{
    case_birational_times_birational, case_conic_times_conic, case_conic_times_curve_blowup,
    CaseOutcome, LinkCandidate, SearchBounds, DERIVED_LINK_IDS,
};
use crate::error::{Error, Result};
use crate::report::{ReportRow, RowStatus};
use crate::tables::Tables;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    #[default]
    Threads,
}

/// The three analyses that can produce classification rows.
pub fn run_derived_cases(
    tables: &Tables,
    bounds: SearchBounds,
    parallelism: Parallelism,
) -> Result<[CaseOutcome; 3]> {
    match parallelism {
        Parallelism::Serial => Ok([
            case_conic_times_conic(tables)?,
            case_conic_times_curve_blowup(tables)?,
            case_birational_times_birational(tables, bounds)?,
        ]),
        Parallelism::Threads => std::thread::scope(|s| {
            let conic = s.spawn(|| case_conic_times_conic(tables));
            let curve = s.spawn(|| case_conic_times_curve_blowup(tables));
            let birational = s.spawn(|| case_birational_times_birational(tables, bounds));
            let join = |h: std::thread::ScopedJoinHandle<'_, Result<CaseOutcome>>| {
                h.join()
                    .map_err(|_| Error::Inconsistency("case analysis thread panicked".into()))?
            };
            Ok([join(conic)?, join(curve)?, join(birational)?])
        }),
    }
}

fn derived_row(id: u8, c: &LinkCandidate) -> ReportRow {
    ReportRow {
        link_id: id,
        status: RowStatus::Derived,
        d: Some(c.d),
        index: Some(1),
        h12: Some(c.h12),
        left: c.left.to_string(),
        right: c.right.to_string(),
        solution: c.solution.clone(),
        errata: c.errata.iter().map(ToString::to_string).collect(),
        citation: None,
        trail: c.trail.clone(),
    }
}

/// Merges derived links 7, 11, 13, 14 with the cited rows; exactly 17 rows
/// sorted by link id.
pub fn assemble_classification(
    tables: &Tables,
    bounds: SearchBounds,
    parallelism: Parallelism,
) -> Result<Vec<ReportRow>> {
    rows_from_outcomes(tables, &run_derived_cases(tables, bounds, parallelism)?)
}

pub fn rows_from_outcomes(tables: &Tables, outcomes: &[CaseOutcome]) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for id in DERIVED_LINK_IDS {
        let hits: Vec<&LinkCandidate> = outcomes
            .iter()
            .flat_map(|o| o.candidates.iter())
            .filter(|c| c.link_id == Some(id))
            .collect();
        match hits.as_slice() {
            [c] => rows.push(derived_row(id, c)),
            [] => {
                return Err(Error::Inconsistency(format!(
                    "no candidate derived for link {id}"
                )))
            }
            _ => {
                return Err(Error::Inconsistency(format!(
                    "{} candidates match link {id}",
                    hits.len()
                )))
            }
        }
    }
    for cited in tables.cited_links() {
        let h12 = match (cited.d, cited.index) {
            (Some(d), Some(i)) => tables.row(d, i).map(|r| r.h12),
            _ => None,
        };
        rows.push(ReportRow {
            link_id: cited.link_id,
            status: RowStatus::Cited,
            d: cited.d,
            index: cited.index,
            h12,
            left: "del Pezzo fibration".to_string(),
            right: format!("cited: {}", cited.citation),
            solution: None,
            errata: Vec::new(),
            citation: Some(cited.citation.clone()),
            trail: Vec::new(),
        });
    }
    rows.sort_by_key(|r| r.link_id);

    let ids: BTreeSet<u8> = rows.iter().map(|r| r.link_id).collect();
    if ids.len() != rows.len() {
        return Err(Error::Inconsistency(
            "duplicate link ids in classification".into(),
        ));
    }
    if ids != (1..=17).collect() {
        return Err(Error::Inconsistency(format!(
            "classification covers link ids {ids:?}, expected 1..=17"
        )));
    }
    Ok(rows)
}
