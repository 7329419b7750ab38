//! The case analyses over the pairs of extremal contractions `(pi1, pi2)`.
//!
//! Each analysis is a pure function of the loaded [`Tables`] and returns a
//! [`CaseOutcome`]: the surviving [`LinkCandidate`]s plus a trail with one
//! entry per subcase examined, including the ones that were emptied.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{
    is_valid_discriminant_degree, rational_solutions, solve_system, DiophantineSystem, SolutionPair,
};
use crate::tables::{FanoNumerics, PointContractionKind, Tables};

/// `h^{1,2}` of a standard conic bundle over `P^2` with discriminant degree `d1`.
pub fn conic_bundle_h12(d1: i64) -> i64 {
    d1 * (d1 - 3) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LinkSide {
    ConicBundle {
        d1: i64,
    },
    /// Blow-up of a smooth curve of genus `genus` and anticanonical degree
    /// `curve_degree` on a smooth rank-one Fano threefold `base`.
    CurveBlowup {
        base: FanoNumerics,
        genus: i64,
        curve_degree: i64,
    },
    PointContraction {
        kind: PointContractionKind,
    },
    CitedDelPezzoFibration {
        link_id: u8,
    },
}

impl LinkSide {
    pub fn conic_bundle(d1: i64) -> Result<Self> {
        if !is_valid_discriminant_degree(d1) {
            return Err(Error::InvalidArgument(format!(
                "conic bundle discriminant degree {d1} not in [0,11] \\ {{1,2}}"
            )));
        }
        Ok(Self::ConicBundle { d1 })
    }

    pub fn curve_blowup(base: FanoNumerics, genus: i64, curve_degree: i64) -> Result<Self> {
        if genus < 0 || curve_degree < 1 {
            return Err(Error::InvalidArgument(format!(
                "curve blow-up needs g >= 0 and dC >= 1, got g={genus}, dC={curve_degree}"
            )));
        }
        Ok(Self::CurveBlowup {
            base,
            genus,
            curve_degree,
        })
    }

    /// `(-K_X . D^2, (-K_X)^2 . D)` for the exceptional divisor of a
    /// birational side.
    pub fn exceptional_numbers(&self) -> Option<(i64, i64)> {
        match *self {
            Self::CurveBlowup {
                genus,
                curve_degree,
                ..
            } => Some((2 * genus - 2, curve_degree + 2 - 2 * genus)),
            Self::PointContraction { kind } => Some((kind.k_d2_squared(), kind.k2_d2())),
            _ => None,
        }
    }

    /// `-K^3` of the blow-up of a curve: `e - 2 + 2g - 2 dC`.
    pub fn blowup_degree(&self) -> Option<i64> {
        match *self {
            Self::CurveBlowup {
                base,
                genus,
                curve_degree,
            } => Some(base.d - 2 + 2 * genus - 2 * curve_degree),
            _ => None,
        }
    }
}

impl fmt::Display for LinkSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConicBundle { d1 } => write!(f, "conic bundle over P^2, d1={d1}"),
            Self::CurveBlowup {
                base,
                genus,
                curve_degree,
            } => write!(
                f,
                "blow-up of curve (g={genus}, dC={curve_degree}) on (e={},i={},h12={})",
                base.d, base.index, base.h12
            ),
            Self::PointContraction { kind } => write!(f, "point contraction ({kind})"),
            Self::CitedDelPezzoFibration { .. } => f.write_str("del Pezzo fibration"),
        }
    }
}

/// One step of a derivation: what was examined and the exact equation
/// instances that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailStep {
    pub text: String,
    pub checks: Vec<String>,
}

impl TrailStep {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            checks: Vec::new(),
        }
    }

    pub fn check(mut self, c: impl Into<String>) -> Self {
        self.checks.push(c.into());
        self
    }
}

impl fmt::Display for TrailStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)?;
        for c in &self.checks {
            write!(f, "\n    {c}")?;
        }
        Ok(())
    }
}

/// A published value that disagrees with the exact derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub printed: SolutionPair,
    pub derived: SolutionPair,
}

impl fmt::Display for Erratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "source prints {}; derived {}",
            self.printed, self.derived
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkCandidate {
    pub left: LinkSide,
    pub right: LinkSide,
    pub d: i64,
    pub h12: i64,
    /// Transfer-system solution; `None` when neither side is a conic bundle.
    pub solution: Option<SolutionPair>,
    pub system: Option<String>,
    pub link_id: Option<u8>,
    pub errata: Vec<Erratum>,
    pub trail: Vec<TrailStep>,
}

/// Result of one case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseOutcome {
    pub case: &'static str,
    pub candidates: Vec<LinkCandidate>,
    pub trail: Vec<TrailStep>,
}

/// A row of the admissible `(d, h^{1,2}, d1)` list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiamondTriple {
    pub d: i64,
    pub h12: i64,
    pub d1: i64,
}

impl fmt::Display for DiamondTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.h12, self.d1)
    }
}

/// Numerical fingerprint of a derived link, with the `(a, b)` the source
/// prints for it (if any).
struct KnownLink {
    id: u8,
    d: i64,
    left: LinkSide,
    right: LinkSide,
    printed: Option<(i64, i64)>,
}

fn known_links() -> [KnownLink; 4] {
    let p3 = FanoNumerics::new(64, 4, 0);
    let quadric = FanoNumerics::new(54, 3, 0);
    [
        KnownLink {
            id: 7,
            d: 14,
            left: LinkSide::ConicBundle { d1: 5 },
            right: LinkSide::ConicBundle { d1: 5 },
            printed: Some((1, 1)),
        },
        KnownLink {
            id: 11,
            d: 18,
            left: LinkSide::ConicBundle { d1: 4 },
            right: LinkSide::CurveBlowup {
                base: p3,
                genus: 2,
                curve_degree: 24,
            },
            printed: Some((3, 4)),
        },
        KnownLink {
            id: 13,
            d: 22,
            left: LinkSide::CurveBlowup {
                base: p3,
                genus: 0,
                curve_degree: 20,
            },
            right: LinkSide::CurveBlowup {
                base: p3,
                genus: 0,
                curve_degree: 20,
            },
            printed: None,
        },
        KnownLink {
            id: 14,
            d: 22,
            left: LinkSide::ConicBundle { d1: 3 },
            right: LinkSide::CurveBlowup {
                base: quadric,
                genus: 0,
                curve_degree: 15,
            },
            printed: Some((3, 4)),
        },
    ]
}

/// Ids of the links whose rows come out of the analyses here.
pub const DERIVED_LINK_IDS: [u8; 4] = [7, 11, 13, 14];

impl LinkCandidate {
    fn new(left: LinkSide, right: LinkSide, d: i64, h12: i64) -> Self {
        Self {
            left,
            right,
            d,
            h12,
            solution: None,
            system: None,
            link_id: None,
            errata: Vec::new(),
            trail: Vec::new(),
        }
    }

    fn with_solution(mut self, sys: &DiophantineSystem, sol: SolutionPair) -> Self {
        self.system = Some(sys.to_string());
        self.solution = Some(sol);
        self
    }

    /// Orders the two sides so that swapping left and right yields the same
    /// record. Only meaningful when neither side is the conic bundle `pi1`.
    pub fn canonicalize(&mut self) {
        if self.right < self.left {
            std::mem::swap(&mut self.left, &mut self.right);
        }
    }

    /// Matches against the known derived links and attaches an erratum when
    /// the printed `(a, b)` differs from the solved one.
    fn identify(mut self) -> Self {
        for k in known_links() {
            let same_sides = (k.left == self.left && k.right == self.right)
                || (k.left == self.right && k.right == self.left);
            if !(same_sides && k.d == self.d) {
                continue;
            }
            self.link_id = Some(k.id);
            if let (Some((pa, pb)), Some(sol)) = (k.printed, &self.solution) {
                let printed = SolutionPair::ints(pa, pb);
                if &printed != sol {
                    self.errata.push(Erratum {
                        printed,
                        derived: sol.clone(),
                    });
                }
            }
        }
        self
    }

    /// Re-checks the stored solution against the system rebuilt from the sides.
    pub fn verify(&self) -> bool {
        let Some(sol) = &self.solution else {
            return self.solution.is_none() && self.system.is_none();
        };
        match transfer_system(self) {
            Some(sys) => sys.is_solution(&sol.a, &sol.b),
            None => false,
        }
    }
}

/// The transfer system implied by a conic-bundle candidate.
pub fn transfer_system(c: &LinkCandidate) -> Option<DiophantineSystem> {
    let (conic, other) = match (&c.left, &c.right) {
        (LinkSide::ConicBundle { d1 }, other) => (*d1, other),
        (other, LinkSide::ConicBundle { d1 }) => (*d1, other),
        _ => return None,
    };
    let (q, l) = match other {
        LinkSide::ConicBundle { d1: d2 } => (2, 12 - d2),
        side => side.exceptional_numbers()?,
    };
    DiophantineSystem::for_conic_bundle(c.d, conic, q, l).ok()
}

/// `d1` values whose conic-bundle `h^{1,2}` occurs in the master table.
pub fn admissible_discriminants(tables: &Tables) -> BTreeSet<i64> {
    let h12s = tables.h12_values(None);
    (0..=11)
        .filter(|&d1| is_valid_discriminant_degree(d1))
        .filter(|&d1| h12s.contains(&conic_bundle_h12(d1)))
        .collect()
}

/// `(d, h12, d1)` over the rows of the given index with `d1(d1-3)/2 = h12`,
/// ordered by `(d, d1)`.
pub fn diamond_list_for_index(tables: &Tables, index: i64) -> Vec<DiamondTriple> {
    let admissible = admissible_discriminants(tables);
    let mut out: Vec<DiamondTriple> = tables
        .master_table()
        .iter()
        .filter(|r| r.index == index)
        .flat_map(|r| {
            admissible
                .iter()
                .filter(move |&&d1| conic_bundle_h12(d1) == r.h12)
                .map(move |&d1| DiamondTriple {
                    d: r.d,
                    h12: r.h12,
                    d1,
                })
        })
        .collect();
    out.sort();
    out
}

pub fn derive_diamond_list(tables: &Tables) -> Vec<DiamondTriple> {
    diamond_list_for_index(tables, 1)
}

fn format_solutions(sols: &[SolutionPair]) -> String {
    if sols.is_empty() {
        return "none".to_string();
    }
    sols.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// `pi2` contracts a divisor to a point. Every subcase must come out empty:
/// no solution has `a >= 0` in the right integrality class.
pub fn case_conic_times_point(tables: &Tables) -> Result<CaseOutcome> {
    let mut trail = Vec::new();
    let mut candidates = Vec::new();
    for t in derive_diamond_list(tables) {
        for kind in PointContractionKind::ALL {
            let sys =
                DiophantineSystem::for_conic_bundle(t.d, t.d1, kind.k_d2_squared(), kind.k2_d2())?;
            let rational = rational_solutions(&sys)?;
            let integral = solve_system(&sys)?;
            let admissible: Vec<_> = integral
                .iter()
                .filter(|s| !s.a.is_negative())
                .cloned()
                .collect();
            trail.push(
                TrailStep::new(format!("{t} x point contraction ({kind})"))
                    .check(format!("system: {sys}"))
                    .check(format!(
                        "rational solutions: {}",
                        format_solutions(&rational)
                    ))
                    .check(format!(
                        "{:?} solutions: {}",
                        sys.integrality,
                        format_solutions(&integral)
                    ))
                    .check(format!(
                        "admissible (a >= 0): {}",
                        format_solutions(&admissible)
                    )),
            );
            for sol in admissible {
                let mut c = LinkCandidate::new(
                    LinkSide::ConicBundle { d1: t.d1 },
                    LinkSide::PointContraction { kind },
                    t.d,
                    t.h12,
                )
                .with_solution(&sys, sol);
                c.trail.push(trail.last().cloned().expect("pushed above"));
                candidates.push(c.identify());
            }
        }
    }
    Ok(CaseOutcome {
        case: "conic-point",
        candidates,
        trail,
    })
}

/// `pi2` blows up a smooth curve `C2` of genus `g2` on a smooth rank-one
/// Fano threefold `Z2`.
pub fn case_conic_times_curve_blowup(tables: &Tables) -> Result<CaseOutcome> {
    let mut trail = vec![TrailStep::new(
        "bases restricted to smooth rank-one Fano threefolds; singular bases are excluded by an external argument",
    )];
    let mut candidates = Vec::new();
    for t in derive_diamond_list(tables) {
        for base in tables.master_table() {
            let step = TrailStep::new(format!(
                "{t} x blow-up on (e={},i={},h12={})",
                base.d, base.index, base.h12
            ));
            if base.h12 > t.h12 {
                trail.push(step.check(format!("skipped: h12(Z2)={} > h12={}", base.h12, t.h12)));
                continue;
            }
            let genus = t.h12 - base.h12;
            let twice_d2 = base.d - 2 + 2 * genus - t.d;
            let step = step.check(format!(
                "g2 = {} - {} = {genus}; 2 d2 = e - 2 + 2 g2 - d = {twice_d2}",
                t.h12, base.h12
            ));
            if twice_d2 <= 0 || twice_d2 % 2 != 0 {
                trail.push(step.check("skipped: d2 is not a positive integer"));
                continue;
            }
            let d2 = twice_d2 / 2;
            let side = LinkSide::curve_blowup(*base, genus, d2)?;
            let (q, l) = side.exceptional_numbers().expect("curve blow-up");
            let sys = DiophantineSystem::for_conic_bundle(t.d, t.d1, q, l)?;
            let sols = solve_system(&sys)?;
            let admissible: Vec<_> = sols
                .iter()
                .filter(|s| !s.a.is_negative())
                .cloned()
                .collect();
            let step = step
                .check(format!("d2 = {d2}; system: {sys}"))
                .check(format!(
                    "{:?} solutions: {}",
                    sys.integrality,
                    format_solutions(&sols)
                ))
                .check(format!(
                    "admissible (a >= 0): {}",
                    format_solutions(&admissible)
                ));
            for sol in admissible {
                let mut c = LinkCandidate::new(
                    LinkSide::ConicBundle { d1: t.d1 },
                    side.clone(),
                    t.d,
                    t.h12,
                )
                .with_solution(&sys, sol);
                c.trail.push(step.clone());
                candidates.push(c.identify());
            }
            trail.push(step);
        }
    }
    Ok(CaseOutcome {
        case: "conic-curve",
        candidates,
        trail,
    })
}

/// Both sides are conic bundles. `(0, -1)` means the flop composite is
/// biregular and is discarded.
pub fn case_conic_times_conic(tables: &Tables) -> Result<CaseOutcome> {
    let mut trail = Vec::new();
    let mut candidates = Vec::new();
    let biregular = SolutionPair::ints(0, -1);
    for t in derive_diamond_list(tables) {
        let partners = (0..=11).filter(|&d2| {
            is_valid_discriminant_degree(d2)
                && (d2 == t.d1 || ([0, 3].contains(&t.d1) && [0, 3].contains(&d2)))
        });
        for d2 in partners {
            let sys = DiophantineSystem::for_conic_bundle(t.d, t.d1, 2, 12 - d2)?;
            let sols = solve_system(&sys)?;
            let mut step = TrailStep::new(format!("{t} x conic bundle d2={d2}"))
                .check(format!("system: {sys}"))
                .check(format!(
                    "{:?} solutions: {}",
                    sys.integrality,
                    format_solutions(&sols)
                ));
            for sol in sols {
                if sol == biregular {
                    step = step.check("(0,-1) discarded: composite is biregular");
                    continue;
                }
                let mut c = LinkCandidate::new(
                    LinkSide::ConicBundle { d1: t.d1 },
                    LinkSide::ConicBundle { d1: d2 },
                    t.d,
                    t.h12,
                )
                .with_solution(&sys, sol.clone());
                c.trail.push(step.clone().check(format!("{sol} kept")));
                candidates.push(c.identify());
            }
            trail.push(step);
        }
    }
    Ok(CaseOutcome {
        case: "conic-conic",
        candidates,
        trail,
    })
}

pub const DEFAULT_G_MAX: i64 = 20;
pub const DEFAULT_DC_MAX: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub g_max: i64,
    pub dc_max: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            g_max: DEFAULT_G_MAX,
            dc_max: DEFAULT_DC_MAX,
        }
    }
}

impl SearchBounds {
    pub fn validate(&self, tables: &Tables) -> Result<()> {
        if self.g_max < 0 {
            return Err(Error::InvalidArgument(format!(
                "g_max must be >= 0, got {}",
                self.g_max
            )));
        }
        if self.dc_max < 1 {
            return Err(Error::InvalidArgument(format!(
                "dc_max must be >= 1, got {}",
                self.dc_max
            )));
        }
        let limit = 10 * tables.master_table().iter().map(|r| r.d).max().unwrap_or(0);
        for (name, value) in [("g_max", self.g_max), ("dc_max", self.dc_max)] {
            if value > limit {
                return Err(Error::BoundTooLarge { name, value, limit });
            }
        }
        Ok(())
    }
}

/// Both contractions blow up curves on smooth rank-one bases. Over-generates:
/// the result is a candidate list that contains the true answer, with a
/// trail per candidate naming the constraints it passed.
pub fn case_birational_times_birational(
    tables: &Tables,
    bounds: SearchBounds,
) -> Result<CaseOutcome> {
    bounds.validate(tables)?;
    let mut trail = vec![
        TrailStep::new(format!(
            "search bounds g <= {}, dC <= {} (engineering defaults, not forced)",
            bounds.g_max, bounds.dc_max
        )),
        TrailStep::new(
            "bases restricted to smooth rank-one Fano threefolds; singular bases are excluded by an external argument",
        ),
        TrailStep::new("survivors are not pruned against external link tables"),
    ];

    // (side, d, h12, checks)
    let mut sides: Vec<(LinkSide, i64, i64, Vec<String>)> = Vec::new();
    for base in tables.master_table() {
        for genus in 0..=bounds.g_max {
            for dc in 1..=bounds.dc_max {
                let d = base.d - 2 + 2 * genus - 2 * dc;
                if d <= 0 {
                    continue;
                }
                let Some(row) = tables.row(d, 1) else {
                    continue;
                };
                if row.h12 != base.h12 + genus {
                    continue;
                }
                let side = LinkSide::curve_blowup(*base, genus, dc)?;
                let checks = vec![
                    format!("d = {} - 2 + 2*{genus} - 2*{dc} = {d}", base.d),
                    format!("({d},1,{}) in master table", row.h12),
                    format!("h12 = {} + {genus} = {}", base.h12, row.h12),
                ];
                sides.push((side, d, row.h12, checks));
            }
        }
    }
    sides.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
    trail.push(TrailStep::new(format!(
        "{} admissible blow-up sides",
        sides.len()
    )));

    let mut candidates = Vec::new();
    for (i, (left, d, h12, lchecks)) in sides.iter().enumerate() {
        for (right, d_r, _, rchecks) in sides[i..].iter() {
            if d_r != d {
                continue;
            }
            let mut c = LinkCandidate::new(left.clone(), right.clone(), *d, *h12);
            c.canonicalize();
            let mut step = TrailStep::new(format!("left: {left}"));
            for ch in lchecks {
                step = step.check(ch.clone());
            }
            c.trail.push(step);
            let mut step = TrailStep::new(format!("right: {right}"));
            for ch in rchecks {
                step = step.check(ch.clone());
            }
            c.trail.push(step);
            candidates.push(c.identify());
        }
    }
    candidates.sort_by(|x, y| (x.d, &x.left, &x.right).cmp(&(y.d, &y.left, &y.right)));
    trail.push(TrailStep::new(format!(
        "{} candidate pairs",
        candidates.len()
    )));
    Ok(CaseOutcome {
        case: "birational",
        candidates,
        trail,
    })
}
