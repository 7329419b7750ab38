//! Runtime assertions of the fixed published values. Any failure makes the
//! CLI exit with status 1.

use std::fmt;

use serde::Serialize;

use crate::cases::{CaseOutcome, DiamondTriple, LinkSide};
use crate::lattice::{
    degree_split, flopped_curve_intersection, solve_contracted_divisor, solve_involution_image,
    triple_product, CubicForm3, LatticeVector,
};
use crate::report::{ReportRow, RowStatus};
use crate::solver::{anticanonical_minus_h_cubed, SolutionPair};
use crate::tables::FanoNumerics;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl AnchorCheck {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }

    fn shown(name: &'static str, got: String, want: &str) -> Self {
        let passed = got == want;
        let detail = if passed {
            got
        } else {
            format!("got {got}, expected {want}")
        };
        Self::new(name, passed, detail)
    }

    fn eq<T: fmt::Debug + PartialEq>(name: &'static str, got: T, want: T) -> Self {
        let passed = got == want;
        let detail = if passed {
            format!("{got:?}")
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        Self::new(name, passed, detail)
    }
}

impl fmt::Display for AnchorCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok" } else { "FAILED" };
        write!(f, "{tag:6} {}: {}", self.name, self.detail)
    }
}

pub fn all_passed(checks: &[AnchorCheck]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub const DIAMOND: [(i64, i64, i64); 6] = [
    (6, 20, 8),
    (8, 14, 7),
    (14, 5, 5),
    (18, 2, 4),
    (22, 0, 0),
    (22, 0, 3),
];

pub fn check_diamond(list: &[DiamondTriple]) -> Vec<AnchorCheck> {
    let got: Vec<_> = list.iter().map(|t| (t.d, t.h12, t.d1)).collect();
    vec![AnchorCheck::eq("diamond list", got, DIAMOND.to_vec())]
}

pub fn check_conic_point(outcome: &CaseOutcome) -> Vec<AnchorCheck> {
    vec![
        AnchorCheck::eq("conic x point subcases", outcome.trail.len(), 18),
        AnchorCheck::eq("conic x point candidates", outcome.candidates.len(), 0),
    ]
}

fn curve_signature(c: &crate::cases::LinkCandidate) -> Option<(i64, i64, FanoNumerics, i64, i64)> {
    match (&c.left, &c.right) {
        (
            LinkSide::ConicBundle { d1 },
            LinkSide::CurveBlowup {
                base,
                genus,
                curve_degree,
            },
        ) => Some((c.d, *d1, *base, *genus, *curve_degree)),
        _ => None,
    }
}

pub fn check_conic_curve(outcome: &CaseOutcome) -> Vec<AnchorCheck> {
    let got: Vec<_> = outcome
        .candidates
        .iter()
        .map(|c| (curve_signature(c), c.solution.clone()))
        .collect();
    let want = vec![
        (
            Some((18, 4, FanoNumerics::new(64, 4, 0), 2, 24)),
            Some(SolutionPair::ints(3, 4)),
        ),
        (
            Some((22, 3, FanoNumerics::new(54, 3, 0), 0, 15)),
            Some(SolutionPair::ints(2, 3)),
        ),
    ];
    let errata: Vec<String> = outcome
        .candidates
        .iter()
        .flat_map(|c| c.errata.iter().map(ToString::to_string))
        .collect();
    vec![
        AnchorCheck::eq("conic x curve candidates", got, want),
        AnchorCheck::eq(
            "conic x curve errata",
            errata,
            vec!["source prints (3,4); derived (2,3)".to_string()],
        ),
    ]
}

pub fn check_conic_conic(outcome: &CaseOutcome) -> Vec<AnchorCheck> {
    let got: Vec<_> = outcome
        .candidates
        .iter()
        .map(|c| (c.d, c.left.clone(), c.right.clone(), c.solution.clone()))
        .collect();
    let want = vec![(
        14,
        LinkSide::ConicBundle { d1: 5 },
        LinkSide::ConicBundle { d1: 5 },
        Some(SolutionPair::ints(1, 1)),
    )];
    let never_kept = outcome
        .candidates
        .iter()
        .all(|c| c.solution != Some(SolutionPair::ints(0, -1)));
    vec![
        AnchorCheck::eq("conic x conic candidates", got, want),
        AnchorCheck::new(
            "conic x conic discards (0,-1)",
            never_kept,
            format!("{never_kept}"),
        ),
    ]
}

pub fn check_birational(outcome: &CaseOutcome) -> Vec<AnchorCheck> {
    let p3 = LinkSide::CurveBlowup {
        base: FanoNumerics::new(64, 4, 0),
        genus: 0,
        curve_degree: 20,
    };
    let contains = outcome
        .candidates
        .iter()
        .any(|c| c.d == 22 && c.left == p3 && c.right == p3);
    let trails_complete = outcome.candidates.iter().all(|c| c.trail.len() == 2);
    vec![
        AnchorCheck::new(
            "birational contains P^3 (g=0, dC=20) twice, d=22",
            contains,
            format!("{contains} among {} candidates", outcome.candidates.len()),
        ),
        AnchorCheck::new(
            "birational trails complete",
            trails_complete,
            format!("{trails_complete}"),
        ),
    ]
}

pub fn check_classification(rows: &[ReportRow]) -> Vec<AnchorCheck> {
    let ids: Vec<u8> = rows.iter().map(|r| r.link_id).collect();
    let derived: Vec<u8> = rows
        .iter()
        .filter(|r| r.status == RowStatus::Derived)
        .map(|r| r.link_id)
        .collect();
    let cited_ok = rows
        .iter()
        .filter(|r| r.status == RowStatus::Cited)
        .all(|r| r.citation.is_some());
    vec![
        AnchorCheck::eq("classification ids", ids, (1..=17).collect()),
        AnchorCheck::eq("derived rows", derived, vec![7, 11, 13, 14]),
        AnchorCheck::new(
            "cited rows carry citations",
            cited_ok,
            format!("{cited_ok}"),
        ),
    ]
}

pub fn check_lattice() -> Vec<AnchorCheck> {
    let form = CubicForm3::standard();
    let k = LatticeVector::new(1, 1, 0);
    let shown = |r: crate::error::Result<String>| r.unwrap_or_else(|e| format!("error: {e}"));
    let cube = triple_product(&k, &k, &k, &form).to_string();
    let contracted = shown(solve_contracted_divisor(&form).map(|v| v.to_string()));
    let involution = shown(solve_involution_image(&form).map(|v| v.to_string()));
    let splits = degree_split(12).unwrap_or_default();
    let has_splits = splits.contains(&(1, 2, 2)) && splits.contains(&(2, 1, 1));
    vec![
        AnchorCheck::shown("(h1+h2)^3", cube, "12"),
        AnchorCheck::shown(
            "contracted divisor",
            contracted,
            &LatticeVector::zero().to_string(),
        ),
        AnchorCheck::shown(
            "involution image of E",
            involution,
            &LatticeVector::e().to_string(),
        ),
        AnchorCheck::new(
            "degree_split(12) has (1,2,2), (2,1,1)",
            has_splits,
            format!("{splits:?}"),
        ),
        AnchorCheck::eq("(-K-H)^3 at (14,5)", anticanonical_minus_h_cubed(14, 5), -1),
        AnchorCheck::shown(
            "D2.C2 at (14,5)",
            shown(flopped_curve_intersection(14, 5).map(|v| v.to_string())),
            "1",
        ),
    ]
}
