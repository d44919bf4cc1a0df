//! Exact linear algebra: rank, determinants, minors, definiteness
//! certificates, and factorizations over the rationals.
//!
//! Rank and determinants go through fraction-free Bareiss elimination on a
//! denominator-cleared integer copy, so intermediate entries stay minors of
//! the input instead of growing uncontrollably. Semidefiniteness is decided
//! by the signs of the characteristic polynomial coefficients, definiteness
//! by leading principal minors, both exact.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

/// Which cell Bareiss elimination picks when several pivots are available.
/// Rank is pivot-order independent; the second order exists for cross-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    FirstNonzero,
    LastNonzero,
}

fn clear_denominators(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, Rational) {
    let mut scale = Rational::one();
    let mut out = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut lcm = BigInt::one();
        for j in 0..m.cols() {
            lcm = num::integer::lcm(lcm, m.at(i, j).denom().clone());
        }
        scale = scale * Rational::from(lcm.clone());
        let row: Vec<BigInt> = (0..m.cols())
            .map(|j| {
                let e = m.at(i, j);
                e.numer() * (&lcm / e.denom())
            })
            .collect();
        out.push(row);
    }
    (out, scale)
}

struct Elimination {
    rank: usize,
    sign: i32,
    last_pivot: BigInt,
    skipped_column: bool,
}

fn bareiss(mut a: Vec<Vec<BigInt>>, order: PivotOrder) -> Elimination {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1;
    let mut r = 0;
    let mut skipped = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidates = (r..rows).filter(|&i| !a[i][c].is_zero());
        let pivot_row = match order {
            PivotOrder::FirstNonzero => candidates.min(),
            PivotOrder::LastNonzero => candidates.max(),
        };
        let Some(p) = pivot_row else {
            skipped = true;
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Elimination {
        rank: r,
        sign,
        last_pivot: prev,
        skipped_column: skipped,
    }
}

/// Exact rank of any rectangular matrix.
pub fn rank(m: &RationalMatrix) -> usize {
    rank_with_order(m, PivotOrder::FirstNonzero)
}

pub fn rank_with_order(m: &RationalMatrix, order: PivotOrder) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (ints, _) = clear_denominators(m);
    bareiss(ints, order).rank
}

/// Exact determinant of a square matrix. The empty matrix has determinant 1.
pub fn det(m: &RationalMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::ShapeMismatch(format!(
            "determinant needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (ints, scale) = clear_denominators(m);
    let elim = bareiss(ints, PivotOrder::FirstNonzero);
    if elim.rank < n || elim.skipped_column {
        return Ok(Rational::zero());
    }
    let signed = if elim.sign < 0 {
        -elim.last_pivot
    } else {
        elim.last_pivot
    };
    Ok(Rational::from(signed) / scale)
}

/// Minor on the given 1-based row and column index sets.
///
/// The sets must have equal cardinality, contain no duplicates, and lie in
/// bounds; rows and columns are taken in increasing order. Empty sets give 1.
pub fn minor(m: &RationalMatrix, row_set: &[usize], col_set: &[usize]) -> Result<Rational, LinalgError> {
    if row_set.len() != col_set.len() {
        return Err(LinalgError::MinorSizeMismatch);
    }
    let canon = |idx: &[usize], bound: usize| -> Result<Vec<usize>, LinalgError> {
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        if set.len() != idx.len() {
            return Err(LinalgError::DuplicateIndex);
        }
        for &i in &set {
            if i == 0 || i > bound {
                return Err(LinalgError::IndexOutOfBounds(format!(
                    "index {i} not in 1..={bound}"
                )));
            }
        }
        Ok(set.into_iter().map(|i| i - 1).collect())
    };
    let rows = canon(row_set, m.rows())?;
    let cols = canon(col_set, m.cols())?;
    det(&m.submatrix(&rows, &cols))
}

pub fn trace(m: &RationalMatrix) -> Rational {
    (0..m.rows().min(m.cols())).map(|i| m.at(i, i).clone()).sum()
}

/// Coefficients `E_1..E_n` of `det(xI + s) = sum_k E_k x^(n-k)` (`E_0 = 1`),
/// i.e. `E_k` is the sum of all k x k principal minors of `s`.
///
/// Computed by the Faddeev-LeVerrier recurrence; the divisions are exact.
/// Errors on non-symmetric input because every caller in this crate uses the
/// coefficients as eigenvalue-sign certificates, which needs real spectra.
pub fn char_poly_sums(s: &RationalMatrix) -> Result<Vec<Rational>, LinalgError> {
    if !s.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = s.rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut m = RationalMatrix::identity(n);
    for k in 1..=n {
        // m enters as M_{k-1} + c_{k-1} I, with M_0 = 0 and c_0 = 1.
        m = s * &m;
        let c = -(trace(&m) / Rational::from_integer(k as i64));
        // E_k = (-1)^k c_k where det(xI - s) = x^n + c_1 x^(n-1) + ...
        let e = if k % 2 == 0 { c.clone() } else { -c.clone() };
        coeffs.push(e);
        if k < n {
            for i in 0..n {
                m[(i, i)] += &c;
            }
        }
    }
    Ok(coeffs)
}

/// Exact positive semidefiniteness test for a symmetric matrix: all
/// characteristic coefficients `E_k` are nonnegative.
pub fn is_positive_semidefinite(s: &RationalMatrix) -> Result<bool, LinalgError> {
    Ok(char_poly_sums(s)?.iter().all(|e| !e.is_negative()))
}

/// Exact positive definiteness test: all leading principal minors positive.
pub fn is_positive_definite(s: &RationalMatrix) -> Result<bool, LinalgError> {
    if !s.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    for k in 1..=s.rows() {
        let idx: Vec<usize> = (1..=k).collect();
        if !minor(s, &idx, &idx)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Square-root-free `L D L^t` factorization of a PSD matrix, pivots taken in
/// natural order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdlFactorization {
    /// Unit lower triangular. Column `j` is zero below the diagonal whenever
    /// `diag[j]` is zero.
    pub unit_lower: RationalMatrix,
    pub diag: Vec<Rational>,
    /// 1-based positions of the strictly positive pivots.
    pub support: BTreeSet<usize>,
}

impl LdlFactorization {
    pub fn reconstruct(&self) -> RationalMatrix {
        let l = &self.unit_lower;
        let d = RationalMatrix::diagonal(&self.diag);
        &(l * &d) * &l.transpose()
    }
}

/// Factors a symmetric PSD matrix as `L D L^t` without pivoting.
///
/// A zero pivot is legal only when its entire residual column is zero, which
/// is automatic for PSD input; in that case the `L` column is left as the
/// unit column. A negative pivot, or a zero pivot with a nonzero residual
/// column, certifies the input is not PSD and is reported as an error.
pub fn ldl(s: &RationalMatrix) -> Result<LdlFactorization, LinalgError> {
    if !s.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = s.rows();
    let mut w = s.clone();
    let mut l = RationalMatrix::identity(n);
    let mut diag = Vec::with_capacity(n);
    let mut support = BTreeSet::new();
    for j in 0..n {
        let d = w.at(j, j).clone();
        if d.is_negative() {
            return Err(LinalgError::NotPositiveSemidefinite(format!(
                "negative pivot {d} at position {}",
                j + 1
            )));
        }
        if d.is_zero() {
            for i in j + 1..n {
                if !w.at(i, j).is_zero() {
                    return Err(LinalgError::NotPositiveSemidefinite(format!(
                        "zero pivot at position {} with nonzero residual entry in row {}",
                        j + 1,
                        i + 1
                    )));
                }
            }
            diag.push(Rational::zero());
            continue;
        }
        support.insert(j + 1);
        let col: Vec<Rational> = (j + 1..n).map(|i| w.at(i, j) / &d).collect();
        for (off, lij) in col.iter().enumerate() {
            l[(j + 1 + off, j)] = lij.clone();
        }
        for i in j + 1..n {
            for jj in j + 1..=i {
                let upd = &(&col[i - j - 1] * &d) * &col[jj - j - 1];
                let cur = w.at(i, jj) - &upd;
                w.set(i, jj, cur.clone());
                w.set(jj, i, cur);
            }
        }
        diag.push(d);
    }
    Ok(LdlFactorization {
        unit_lower: l,
        diag,
        support,
    })
}

fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.at(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a.at(r, j).clone();
                a.set(r, j, a.at(p, j).clone());
                a.set(p, j, tmp);
            }
        }
        let inv = a.at(r, c).recip().expect("pivot nonzero");
        for j in c..cols {
            let v = a.at(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !a.at(i, c).is_zero() {
                let factor = a.at(i, c).clone();
                for j in c..cols {
                    let v = a.at(i, j) - &(&factor * a.at(r, j));
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Solves `a x = b` exactly for a matrix right-hand side.
///
/// Underdetermined systems return the solution with all free variables zero;
/// inconsistent systems are an error.
pub fn solve(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::ShapeMismatch(format!(
            "solve: lhs has {} rows, rhs has {}",
            a.rows(),
            b.rows()
        )));
    }
    let aug = a.hstack(b);
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&c| c >= a.cols()) {
        return Err(LinalgError::Inconsistent);
    }
    let mut x = RationalMatrix::zeros(a.cols(), b.cols());
    for (row, &c) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(c, j, r.at(row, a.cols() + j).clone());
        }
    }
    Ok(x)
}

/// Exact inverse of a square matrix.
pub fn inverse(a: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch(format!(
            "inverse needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if rank(a) < a.rows() {
        return Err(LinalgError::Singular);
    }
    solve(a, &RationalMatrix::identity(a.rows()))
}

/// Basis of the null space, one column per basis vector, each scaled so its
/// first nonzero entry is positive. Zero nullity gives an `n x 0` matrix.
pub fn kernel_basis(a: &RationalMatrix) -> RationalMatrix {
    let (r, pivots) = rref(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = RationalMatrix::zeros(n, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, Rational::one());
        for (row, &pc) in pivots.iter().enumerate() {
            basis.set(pc, k, -r.at(row, fc).clone());
        }
        let lead = (0..n).find(|&i| !basis.at(i, k).is_zero()).expect("free column set");
        if basis.at(lead, k).is_negative() {
            for i in 0..n {
                let v = -basis.at(i, k).clone();
                basis.set(i, k, v);
            }
        }
    }
    basis
}
