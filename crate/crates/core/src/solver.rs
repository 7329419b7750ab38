//! The transfer system relating the two sides of a link whose left side is a
//! conic bundle over the plane.
//!
//! With `k = 12 - d1` the unknown divisor coefficients `(a, b)` satisfy
//!
//! ```text
//! d a^2 - 2 k a b + 2 b^2 = rhs_quadratic     (-K_2 . D_2^2)
//! d a   -   k b           = rhs_linear        ((-K_2)^2 . D_2)
//! ```
//!
//! `solve_system` eliminates `a` through the linear equation and solves the
//! resulting univariate quadratic in `b` exactly. `brute_force_oracle` is an
//! independent grid scan used to cross-check it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::ser::SerializeTuple;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Discriminant degrees a standard conic bundle over `P^2` can have.
pub fn is_valid_discriminant_degree(d1: i64) -> bool {
    (0..=11).contains(&d1) && d1 != 1 && d1 != 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum IntegralityMode {
    Integers,
    HalfIntegers,
}

impl IntegralityMode {
    /// Half-integers exactly when the conic bundle is a `P^1`-bundle (`d1 = 0`).
    pub fn for_discriminant(d1: i64) -> Self {
        if d1 == 0 {
            Self::HalfIntegers
        } else {
            Self::Integers
        }
    }

    pub fn denominator(self) -> u32 {
        match self {
            Self::Integers => 1,
            Self::HalfIntegers => 2,
        }
    }

    pub fn admits(self, x: &Rational) -> bool {
        x.denominator_divides(self.denominator())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiophantineSystem {
    pub d: i64,
    pub d1: i64,
    pub rhs_quadratic: i64,
    pub rhs_linear: i64,
    pub integrality: IntegralityMode,
}

impl DiophantineSystem {
    pub fn new(
        d: i64,
        d1: i64,
        rhs_quadratic: i64,
        rhs_linear: i64,
        integrality: IntegralityMode,
    ) -> Result<Self> {
        let sys = Self {
            d,
            d1,
            rhs_quadratic,
            rhs_linear,
            integrality,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// System with the integrality mode implied by `d1`.
    pub fn for_conic_bundle(d: i64, d1: i64, rhs_quadratic: i64, rhs_linear: i64) -> Result<Self> {
        Self::new(
            d,
            d1,
            rhs_quadratic,
            rhs_linear,
            IntegralityMode::for_discriminant(d1),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.d <= 0 {
            return Err(Error::InvalidSystem(format!(
                "d must be positive, got {}",
                self.d
            )));
        }
        if !is_valid_discriminant_degree(self.d1) {
            return Err(Error::InvalidSystem(format!(
                "d1 must lie in [0,11] \\ {{1,2}}, got {}",
                self.d1
            )));
        }
        if self.integrality != IntegralityMode::for_discriminant(self.d1) {
            return Err(Error::InvalidSystem(format!(
                "integrality {:?} inconsistent with d1 = {}",
                self.integrality, self.d1
            )));
        }
        Ok(())
    }

    /// `(-K)^2 . H` on the conic-bundle side.
    pub fn k(&self) -> i64 {
        12 - self.d1
    }

    /// Left-hand sides minus right-hand sides at `(a, b)`.
    pub fn residuals(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        let d = Rational::from(self.d);
        let k = Rational::from(self.k());
        let two = Rational::from(2);
        let quad =
            &d * a * a - &two * &k * a * b + &two * b * b - Rational::from(self.rhs_quadratic);
        let lin = &d * a - &k * b - Rational::from(self.rhs_linear);
        (quad, lin)
    }

    pub fn is_solution(&self, a: &Rational, b: &Rational) -> bool {
        let (q, l) = self.residuals(a, b);
        q.is_zero() && l.is_zero()
    }
}

impl fmt::Display for DiophantineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k();
        write!(
            f,
            "{d}a^2 - {two_k}ab + 2b^2 = {q}, {d}a - {k}b = {l}",
            d = self.d,
            two_k = 2 * k,
            q = self.rhs_quadratic,
            l = self.rhs_linear,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionPair {
    pub a: Rational,
    pub b: Rational,
}

impl SolutionPair {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn ints(a: i64, b: i64) -> Self {
        Self::new(a.into(), b.into())
    }
}

impl fmt::Display for SolutionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl serde::Serialize for SolutionPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.a)?;
        t.serialize_element(&self.b)?;
        t.end()
    }
}

/// Exact square root of a non-negative rational, if it has one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = exact_isqrt(x.numer())?;
    let m = exact_isqrt(x.denom())?;
    Rational::new(n, m).ok()
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Every rational solution of `sys` admitted by its integrality mode,
/// in lexicographic `(a, b)` order.
///
/// Fails when the system is invalid or when its solution set is an infinite
/// one-parameter family (the substituted equation vanishes identically).
pub fn solve_system(sys: &DiophantineSystem) -> Result<Vec<SolutionPair>> {
    let out: Vec<SolutionPair> = rational_solutions(sys)?
        .into_iter()
        .filter(|s| sys.integrality.admits(&s.a) && sys.integrality.admits(&s.b))
        .collect();
    debug_assert!(out.iter().all(|s| sys.is_solution(&s.a, &s.b)));
    Ok(out)
}

/// All rational solutions, ignoring the integrality mode. Sorted, at most two.
pub fn rational_solutions(sys: &DiophantineSystem) -> Result<Vec<SolutionPair>> {
    sys.validate()?;
    let d = Rational::from(sys.d);
    let k = Rational::from(sys.k());
    let two = Rational::from(2);

    // a = p + r b
    let p = Rational::from(sys.rhs_linear).checked_div(&d)?;
    let r = k.checked_div(&d)?;

    // d (p + r b)^2 - 2k (p + r b) b + 2 b^2 - q = alpha b^2 + beta b + gamma
    let alpha = &d * &r * &r - &two * &k * &r + two.clone();
    let beta = &two * &d * &p * &r - &two * &k * &p;
    let gamma = &d * &p * &p - Rational::from(sys.rhs_quadratic);

    let roots: Vec<Rational> = if alpha.is_zero() {
        if beta.is_zero() {
            if gamma.is_zero() {
                return Err(Error::InvalidSystem(format!(
                    "solution set of {sys} is a one-parameter family"
                )));
            }
            Vec::new()
        } else {
            vec![(-gamma).checked_div(&beta)?]
        }
    } else {
        let disc = &beta * &beta - Rational::from(4) * &alpha * &gamma;
        match rational_sqrt(&disc) {
            None => Vec::new(),
            Some(s) => {
                let denom = &two * &alpha;
                vec![
                    (-&beta - &s).checked_div(&denom)?,
                    (-&beta + s).checked_div(&denom)?,
                ]
            }
        }
    };

    let mut out: Vec<SolutionPair> = roots
        .into_iter()
        .map(|b| SolutionPair::new(&p + &r * &b, b))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Scan of the grid `{n / den : |n / den| <= bound}` for `a`, with `den` the
/// integrality denominator. For each `a` the linear equation admits at most
/// one `b`, which is then checked against the grid and the quadratic.
///
/// Integer arithmetic only; shares no code with [`solve_system`].
pub fn brute_force_oracle(sys: &DiophantineSystem, bound: i64) -> Result<Vec<SolutionPair>> {
    if bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "oracle bound must be >= 1, got {bound}"
        )));
    }
    sys.validate()?;
    let den = i128::from(sys.integrality.denominator());
    let d = i128::from(sys.d);
    let k = i128::from(sys.k());
    let q = i128::from(sys.rhs_quadratic);
    let l = i128::from(sys.rhs_linear);
    let lim = i128::from(bound) * den;

    let mut out = Vec::new();
    // a = na / den, b = nb / den
    for na in -lim..=lim {
        let num = d * na - l * den;
        if num % k != 0 {
            continue;
        }
        let nb = num / k;
        if nb.abs() > lim {
            continue;
        }
        if d * na * na - 2 * k * na * nb + 2 * nb * nb != q * den * den {
            continue;
        }
        let a = Rational::new(BigInt::from(na), BigInt::from(den))?;
        let b = Rational::new(BigInt::from(nb), BigInt::from(den))?;
        out.push(SolutionPair::new(a, b));
    }
    Ok(out)
}

/// `(-K - H)^3` on the conic-bundle side, expanded with `H^3 = 0`,
/// `-K . H^2 = 2` and `(-K)^2 . H = 12 - d1`.
pub fn anticanonical_minus_h_cubed(d: i64, d1: i64) -> i64 {
    d - 3 * (12 - d1) + 3 * 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(d: i64, d1: i64, q: i64, l: i64) -> DiophantineSystem {
        DiophantineSystem::for_conic_bundle(d, d1, q, l).unwrap()
    }

    #[test]
    fn conic_conic_link_seven() {
        let s = sys(14, 5, 2, 7);
        assert_eq!(
            solve_system(&s).unwrap(),
            vec![SolutionPair::ints(0, -1), SolutionPair::ints(1, 1)]
        );
        assert_eq!(
            brute_force_oracle(&s, 100).unwrap(),
            solve_system(&s).unwrap()
        );
    }

    #[test]
    fn curve_blowup_case_one() {
        let sols = solve_system(&sys(18, 4, 2, 22)).unwrap();
        let nonneg: Vec<_> = sols.into_iter().filter(|s| !s.a.is_negative()).collect();
        assert_eq!(nonneg, vec![SolutionPair::ints(3, 4)]);
    }

    #[test]
    fn curve_blowup_case_two_is_two_three() {
        let s = sys(22, 3, -2, 17);
        assert_eq!(solve_system(&s).unwrap(), vec![SolutionPair::ints(2, 3)]);
        assert!(!s.is_solution(&3.into(), &4.into()));
    }

    #[test]
    fn p1_bundle_half_integers() {
        let s = sys(22, 0, 2, 12);
        assert_eq!(s.integrality, IntegralityMode::HalfIntegers);
        assert_eq!(solve_system(&s).unwrap(), vec![SolutionPair::ints(0, -1)]);
        assert_eq!(
            brute_force_oracle(&s, 50).unwrap(),
            vec![SolutionPair::ints(0, -1)]
        );
    }

    #[test]
    fn point_contraction_kind_a_has_no_solutions() {
        let s = sys(18, 4, -2, 4);
        assert!(brute_force_oracle(&s, 100).unwrap().is_empty());
        assert!(solve_system(&s).unwrap().is_empty());
    }

    #[test]
    fn half_integer_roots_are_kept() {
        // Right-hand sides built from (a, b) = (1/2, 1/2) on a P^1-bundle.
        let (a, b) = (Rational::new(1, 2).unwrap(), Rational::new(1, 2).unwrap());
        let d = 22;
        // q = d a^2 - 24 a b + 2 b^2, l = d a - 12 b
        let q = Rational::from(d) * &a * &a - Rational::from(24) * &a * &b
            + Rational::from(2) * &b * &b;
        let l = Rational::from(d) * &a - Rational::from(12) * &b;
        let s = sys(d, 0, q.to_i64().unwrap(), l.to_i64().unwrap());
        let sols = solve_system(&s).unwrap();
        assert!(sols.contains(&SolutionPair::new(a, b)));
        assert_eq!(sols, brute_force_oracle(&s, 20).unwrap());
    }

    #[test]
    fn invalid_systems() {
        assert!(DiophantineSystem::for_conic_bundle(0, 3, 1, 1).is_err());
        assert!(DiophantineSystem::for_conic_bundle(10, 1, 1, 1).is_err());
        assert!(DiophantineSystem::for_conic_bundle(10, 12, 1, 1).is_err());
        assert!(DiophantineSystem::new(10, 3, 1, 1, IntegralityMode::HalfIntegers).is_err());
        let bad = DiophantineSystem {
            d: 0,
            d1: 3,
            rhs_quadratic: 0,
            rhs_linear: 0,
            integrality: IntegralityMode::Integers,
        };
        assert!(matches!(solve_system(&bad), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn oracle_rejects_zero_bound() {
        assert!(brute_force_oracle(&sys(14, 5, 2, 7), 0).is_err());
    }

    #[test]
    fn degenerate_family_is_an_error() {
        // 2d = k^2 with d = 8, d1 = 8 and l^2 = q d.
        let s = sys(8, 8, 2, 4);
        assert!(solve_system(&s).is_err());
        assert!(brute_force_oracle(&s, 10).unwrap().len() > 2);
        // Leading coefficient zero but inconsistent constant: empty.
        assert!(solve_system(&sys(8, 8, 2, 3)).unwrap().is_empty());
    }

    #[test]
    fn sign_convention_zero_minus_one() {
        for d in [2, 4, 6, 8, 10, 12, 14, 16, 18, 22, 24, 32, 40, 54, 64] {
            for d1 in (0..=11).filter(|&x| is_valid_discriminant_degree(x)) {
                let s = sys(d, d1, 2, 12 - d1);
                match solve_system(&s) {
                    Ok(sols) => assert!(sols.contains(&SolutionPair::ints(0, -1)), "{s}"),
                    // 2d = k^2 and l^2 = q d: a whole family through (0,-1).
                    Err(_) => assert_eq!(2 * d, (12 - d1) * (12 - d1)),
                }
                assert!(s.is_solution(&0.into(), &(-1).into()));
            }
        }
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(
            rational_sqrt(&Rational::new(9, 4).unwrap()),
            Some(Rational::new(3, 2).unwrap())
        );
        assert_eq!(rational_sqrt(&Rational::new(2, 1).unwrap()), None);
        assert_eq!(rational_sqrt(&Rational::new(1, 2).unwrap()), None);
        assert_eq!(rational_sqrt(&Rational::from(-4)), None);
        assert_eq!(rational_sqrt(&Rational::zero()), Some(Rational::zero()));
    }

    #[test]
    fn cubic_expansion() {
        assert_eq!(anticanonical_minus_h_cubed(14, 5), -1);
        assert_eq!(anticanonical_minus_h_cubed(22, 0), -8);
        assert_eq!(anticanonical_minus_h_cubed(30, 0), 0);
    }
}
