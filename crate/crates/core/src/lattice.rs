//! Trilinear intersection form on a rank-three Picard lattice with basis
//! `(h1, h2, E)`: `h1` and `h2` pulled back from the two conic-bundle bases,
//! `E` the exceptional quadric surface over the node.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solver::anticanonical_minus_h_cubed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    H1 = 0,
    H2 = 1,
    E = 2,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::H1, Basis::H2, Basis::E];
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::H1 => "h1",
            Basis::H2 => "h2",
            Basis::E => "E",
        })
    }
}

/// Symmetric integer trilinear form `T[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm3 {
    t: [[[i64; 3]; 3]; 3],
}

impl Default for CubicForm3 {
    fn default() -> Self {
        Self::standard()
    }
}

impl CubicForm3 {
    /// All-zero form.
    pub fn zero() -> Self {
        Self {
            t: [[[0; 3]; 3]; 3],
        }
    }

    /// The form used for the link-7 computations. The entries involving `E^2`
    /// come from `E = P^1 x P^1` with `E|_E = O(-1,-1)`.
    pub fn standard() -> Self {
        use Basis::*;
        let mut f = Self::zero();
        f.set(H1, H1, H2, 2);
        f.set(H1, H2, H2, 2);
        f.set(H1, H2, E, 1);
        f.set(H1, H1, E, 0);
        f.set(H2, H2, E, 0);
        f.set(H1, H1, H1, 0);
        f.set(H2, H2, H2, 0);
        f.with_exceptional_squares(-1, -1, 2)
    }

    /// Replaces `h1.E^2`, `h2.E^2` and `E^3`.
    pub fn with_exceptional_squares(mut self, h1_e_e: i64, h2_e_e: i64, e_cubed: i64) -> Self {
        use Basis::*;
        self.set(H1, E, E, h1_e_e);
        self.set(H2, E, E, h2_e_e);
        self.set(E, E, E, e_cubed);
        self
    }

    /// Sets `T` on every permutation of `(i, j, k)`.
    pub fn set(&mut self, i: Basis, j: Basis, k: Basis, value: i64) {
        let (i, j, k) = (i as usize, j as usize, k as usize);
        for (x, y, z) in [
            (i, j, k),
            (i, k, j),
            (j, i, k),
            (j, k, i),
            (k, i, j),
            (k, j, i),
        ] {
            self.t[x][y][z] = value;
        }
    }

    pub fn get(&self, i: Basis, j: Basis, k: Basis) -> i64 {
        self.t[i as usize][j as usize][k as usize]
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let mut out = self.clone();
        out.t
            .iter_mut()
            .flatten()
            .flatten()
            .for_each(|v| *v *= factor);
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                (0..3).all(|k| {
                    let v = self.t[i][j][k];
                    v == self.t[i][k][j]
                        && v == self.t[j][i][k]
                        && v == self.t[j][k][i]
                        && v == self.t[k][i][j]
                        && v == self.t[k][j][i]
                })
            })
        })
    }
}

/// Divisor class `c_h1 h1 + c_h2 h2 + c_E E` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    pub coeffs: [Rational; 3],
}

impl LatticeVector {
    pub fn new(
        c_h1: impl Into<Rational>,
        c_h2: impl Into<Rational>,
        c_e: impl Into<Rational>,
    ) -> Self {
        Self {
            coeffs: [c_h1.into(), c_h2.into(), c_e.into()],
        }
    }

    pub fn basis(b: Basis) -> Self {
        let mut coeffs = [Rational::zero(), Rational::zero(), Rational::zero()];
        coeffs[b as usize] = Rational::one();
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn h1() -> Self {
        Self::basis(Basis::H1)
    }

    pub fn h2() -> Self {
        Self::basis(Basis::H2)
    }

    pub fn e() -> Self {
        Self::basis(Basis::E)
    }

    pub fn coeff(&self, b: Basis) -> &Rational {
        &self.coeffs[b as usize]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * s),
        }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} h1 + {} h2 + {} E",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

pub fn triple_product(
    u: &LatticeVector,
    v: &LatticeVector,
    w: &LatticeVector,
    form: &CubicForm3,
) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..3 {
        if u.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            if v.coeffs[j].is_zero() {
                continue;
            }
            for k in 0..3 {
                let t = form.t[i][j][k];
                if t == 0 || w.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc + &u.coeffs[i] * &v.coeffs[j] * &w.coeffs[k] * Rational::from(t);
            }
        }
    }
    acc
}

/// Rows are the test products `x.h1^2`, `x.h2^2`, `x.h1.h2`; columns are the
/// coefficients of `x` in the basis.
pub fn intersection_matrix(form: &CubicForm3) -> [[Rational; 3]; 3] {
    let tests = [
        (Basis::H1, Basis::H1),
        (Basis::H2, Basis::H2),
        (Basis::H1, Basis::H2),
    ];
    std::array::from_fn(|row| {
        let (p, q) = tests[row];
        std::array::from_fn(|col| Rational::from(form.get(Basis::ALL[col], p, q)))
    })
}

pub fn determinant3(m: &[[Rational; 3]; 3]) -> Rational {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &m[r1][c1] * &m[r2][c2] - &m[r1][c2] * &m[r2][c1]
    };
    &m[0][0] * minor(1, 2, 1, 2) - &m[0][1] * minor(1, 2, 0, 2) + &m[0][2] * minor(1, 2, 0, 1)
}

/// Solves `x.h1^2 = rhs[0]`, `x.h2^2 = rhs[1]`, `x.h1.h2 = rhs[2]` by exact
/// Gaussian elimination.
pub fn solve_intersection_conditions(
    form: &CubicForm3,
    rhs: [Rational; 3],
) -> Result<LatticeVector> {
    let m = intersection_matrix(form);
    let mut aug: Vec<Vec<Rational>> = (0..3)
        .map(|r| {
            let mut row = m[r].to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();

    for col in 0..3 {
        let pivot = (col..3)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(Error::SingularSystem)?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip()?;
        for v in aug[col][col..].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v = &*v - &factor * p;
            }
        }
    }
    Ok(LatticeVector {
        coeffs: std::array::from_fn(|i| aug[i][3].clone()),
    })
}

/// Class `F` of a divisor contracted by the map to `P^2 x P^2`: it meets
/// `h1^2`, `h2^2` and `h1.h2` trivially. The unique solution is zero.
pub fn solve_contracted_divisor(form: &CubicForm3) -> Result<LatticeVector> {
    solve_intersection_conditions(form, [Rational::zero(), Rational::zero(), Rational::zero()])
}

/// Image of `E` under an involution fixing `h1` and `h2`: it must have the
/// same products with `h1^2`, `h2^2`, `h1.h2` as `E` itself.
pub fn solve_involution_image(form: &CubicForm3) -> Result<LatticeVector> {
    let e = LatticeVector::e();
    let (h1, h2) = (LatticeVector::h1(), LatticeVector::h2());
    solve_intersection_conditions(
        form,
        [
            triple_product(&e, &h1, &h1, form),
            triple_product(&e, &h2, &h2, form),
            triple_product(&e, &h1, &h2, form),
        ],
    )
}

/// `(deg sigma, e1, e2)` with `total = 3 deg(sigma) (e1 + e2)`, all positive,
/// `e1 <= e2`, sorted.
pub fn degree_split(total: i64) -> Result<Vec<(i64, i64, i64)>> {
    if total <= 0 || total % 3 != 0 {
        return Err(Error::InvalidArgument(format!(
            "total must be a positive multiple of 3, got {total}"
        )));
    }
    let m = total / 3;
    let mut out = Vec::new();
    for s in (1..=m).filter(|s| m % s == 0) {
        let sum = m / s;
        for e1 in 1..=sum / 2 {
            out.push((s, e1, sum - e1));
        }
    }
    out.sort();
    Ok(out)
}

/// The splits with `e1 = e2`, forced by both projections being conic bundles.
pub fn symmetric_degree_splits(total: i64) -> Result<Vec<(i64, i64, i64)>> {
    Ok(degree_split(total)?
        .into_iter()
        .filter(|&(_, e1, e2)| e1 == e2)
        .collect())
}

/// Exact integer cube root, `None` if `n` is not a cube.
pub fn integer_cube_root(n: i64) -> Option<i64> {
    let neg = n < 0;
    let m = n.unsigned_abs();
    let mut r = (m as f64).cbrt().round() as u64;
    // correct float drift
    while r.checked_pow(3).is_none_or(|c| c > m) {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= m) {
        r += 1;
    }
    if r.pow(3) != m {
        return None;
    }
    let r = r as i64;
    Some(if neg { -r } else { r })
}

/// `D2 . C2` from `(-K - H1)^3 = D1^3 = D2^3 - (D2.C2)^3` with `D2^3 = 0`.
pub fn flopped_curve_intersection(d: i64, d1: i64) -> Result<i64> {
    let value = anticanonical_minus_h_cubed(d, d1);
    integer_cube_root(-value).ok_or(Error::NotACube { value: -value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64, c: i64) -> LatticeVector {
        LatticeVector::new(a, b, c)
    }

    #[test]
    fn stated_entries() {
        use Basis::*;
        let f = CubicForm3::standard();
        assert!(f.is_symmetric());
        assert_eq!(f.get(H1, H1, H2), 2);
        assert_eq!(f.get(H2, H1, H2), 2);
        assert_eq!(f.get(E, H2, H1), 1);
        assert_eq!(f.get(H1, E, H1), 0);
        assert_eq!(f.get(H2, H2, E), 0);
        assert_eq!(f.get(H1, H1, H1), 0);
        assert_eq!(f.get(E, E, H1), -1);
        assert_eq!(f.get(E, E, E), 2);
    }

    #[test]
    fn anticanonical_cube_is_twelve() {
        let f = CubicForm3::standard();
        let k = v(1, 1, 0);
        assert_eq!(triple_product(&k, &k, &k, &f), 12);
        assert_eq!(triple_product(&v(1, 0, 0), &v(1, 0, 0), &v(0, 1, 0), &f), 2);
        assert_eq!(triple_product(&LatticeVector::zero(), &k, &k, &f), 0);
    }

    #[test]
    fn contracted_divisor_is_zero() {
        let f = CubicForm3::standard();
        assert_eq!(determinant3(&intersection_matrix(&f)), -4);
        assert_eq!(solve_contracted_divisor(&f).unwrap(), LatticeVector::zero());
        assert_eq!(
            solve_contracted_divisor(&f.scaled(2)).unwrap(),
            LatticeVector::zero()
        );
    }

    #[test]
    fn involution_fixes_e() {
        let f = CubicForm3::standard();
        let img = solve_involution_image(&f).unwrap();
        assert_eq!(img, LatticeVector::e());
        let (h1, h2) = (LatticeVector::h1(), LatticeVector::h2());
        assert_eq!(triple_product(&img, &h1, &h2, &f), 1);
        assert_eq!(
            solve_intersection_conditions(&f, [0.into(), 0.into(), 0.into()]).unwrap(),
            LatticeVector::zero()
        );
    }

    #[test]
    fn exceptional_squares_do_not_matter() {
        let f = CubicForm3::standard().with_exceptional_squares(0, 0, 0);
        let k = v(1, 1, 0);
        assert_eq!(triple_product(&k, &k, &k, &f), 12);
        assert_eq!(solve_contracted_divisor(&f).unwrap(), LatticeVector::zero());
        assert_eq!(solve_involution_image(&f).unwrap(), LatticeVector::e());
    }

    #[test]
    fn singular_form_is_rejected() {
        assert!(matches!(
            solve_contracted_divisor(&CubicForm3::zero()),
            Err(Error::SingularSystem)
        ));
    }

    #[test]
    fn degree_splits() {
        assert_eq!(
            degree_split(12).unwrap(),
            vec![(1, 1, 3), (1, 2, 2), (2, 1, 1)]
        );
        assert_eq!(
            symmetric_degree_splits(12).unwrap(),
            vec![(1, 2, 2), (2, 1, 1)]
        );
        assert!(degree_split(3).unwrap().is_empty());
        assert!(degree_split(10).is_err());
        assert!(degree_split(0).is_err());
        assert!(degree_split(-6).is_err());
    }

    #[test]
    fn cube_roots() {
        assert_eq!(integer_cube_root(1), Some(1));
        assert_eq!(integer_cube_root(-27), Some(-3));
        assert_eq!(integer_cube_root(0), Some(0));
        assert_eq!(integer_cube_root(2), None);
        assert_eq!(integer_cube_root(-9), None);
        assert_eq!(integer_cube_root(i64::MAX), None);
        assert_eq!(integer_cube_root(2_097_151i64.pow(3)), Some(2_097_151));
    }

    #[test]
    fn d2_dot_c2_is_one() {
        assert_eq!(flopped_curve_intersection(14, 5).unwrap(), 1);
        // (22, 0): (-K - H)^3 = -8, cube root 2.
        assert_eq!(flopped_curve_intersection(22, 0).unwrap(), 2);
        assert!(matches!(
            flopped_curve_intersection(16, 0),
            Err(Error::NotACube { value: 14 })
        ));
    }
}
