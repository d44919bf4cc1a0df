//! Products over the dense unipotent cell: staircase-indexed words in the
//! lowering generators, their closed-form minors, and the positivity
//! criterion those minors certify.
//!
//! The parameter set is {(p, q) : 1 <= q <= n, n+1-q <= p <= n}; the product
//! is taken column by column, u = prod_{i=1..n} y_{n+1-i}(a_{n+1-i,i}) ...
//! y_n(a_{n,i}). Right multiplication by a generator touches at most two
//! columns, so the product is assembled by sparse column updates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SymplecticError;
use crate::linalg::{is_positive_definite, minor};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

use super::SymplecticElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "UStarParamsWire", into = "UStarParamsWire")]
pub struct UStarParams {
    n: usize,
    a: BTreeMap<(usize, usize), Rational>,
}

#[derive(Serialize, Deserialize)]
struct UStarParamsWire {
    n: usize,
    a: BTreeMap<String, Rational>,
}

impl TryFrom<UStarParamsWire> for UStarParams {
    type Error = SymplecticError;
    fn try_from(w: UStarParamsWire) -> Result<Self, Self::Error> {
        let mut a = BTreeMap::new();
        for (key, value) in w.a {
            let (p, q) = key
                .split_once(',')
                .and_then(|(p, q)| Some((p.trim().parse().ok()?, q.trim().parse().ok()?)))
                .ok_or(SymplecticError::BadParameterIndex { p: 0, q: 0, rank: w.n })?;
            a.insert((p, q), value);
        }
        UStarParams::new(w.n, a)
    }
}

impl From<UStarParams> for UStarParamsWire {
    fn from(p: UStarParams) -> UStarParamsWire {
        UStarParamsWire {
            n: p.n,
            a: p.a
                .into_iter()
                .map(|((p, q), v)| (format!("{p},{q}"), v))
                .collect(),
        }
    }
}

impl UStarParams {
    /// The required key set, in product order: for each column q, the rows
    /// n+1-q through n.
    pub fn index_set(n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for q in 1..=n {
            for p in (n + 1 - q)..=n {
                out.push((p, q));
            }
        }
        out
    }

    /// Validates that the map carries exactly the staircase index set.
    pub fn new(n: usize, a: BTreeMap<(usize, usize), Rational>) -> Result<Self, SymplecticError> {
        if n == 0 {
            return Err(SymplecticError::BadParameterIndex { p: 0, q: 0, rank: 0 });
        }
        for &(p, q) in a.keys() {
            let valid = (1..=n).contains(&q) && (n + 1 - q..=n).contains(&p);
            if !valid {
                return Err(SymplecticError::BadParameterIndex { p, q, rank: n });
            }
        }
        for (p, q) in Self::index_set(n) {
            if !a.contains_key(&(p, q)) {
                return Err(SymplecticError::MissingParameter { p, q });
            }
        }
        Ok(UStarParams { n, a })
    }

    /// Convenience constructor from listed pairs.
    pub fn from_pairs(n: usize, pairs: &[((usize, usize), Rational)]) -> Result<Self, SymplecticError> {
        Self::new(n, pairs.iter().cloned().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> &Rational {
        &self.a[&(p, q)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.a.iter()
    }

    /// All parameters nonzero: the product lies in the dense cell.
    pub fn in_dense_cell(&self) -> bool {
        self.a.values().all(|v| !v.is_zero())
    }

    /// The positivity precondition: every a_(n,q) strictly positive, every
    /// other parameter nonzero.
    pub fn check_positive_slice(&self) -> Result<(), SymplecticError> {
        for (&(p, q), v) in &self.a {
            if p == self.n {
                if !v.is_positive() {
                    return Err(SymplecticError::ParameterSign {
                        p,
                        q,
                        reason: "must be strictly positive".into(),
                    });
                }
            } else if v.is_zero() {
                return Err(SymplecticError::ParameterSign {
                    p,
                    q,
                    reason: "must be nonzero".into(),
                });
            }
        }
        Ok(())
    }
}

fn product_impl(params: &UStarParams, skip_final_row: bool) -> SymplecticElement {
    let n = params.n;
    let mut m = RationalMatrix::identity(2 * n);
    for q in 1..=n {
        for p in (n + 1 - q)..=n {
            if skip_final_row && p == n {
                continue;
            }
            let a = params.get(p, q);
            if a.is_zero() {
                continue;
            }
            // Right multiplication by I + a f_p, f_p = E_(p+1,p) - E_(n+p,n+p+1)
            // for p < n and f_n = E_(2n,n): two column axpys.
            if p < n {
                for r in 0..2 * n {
                    let add = a * &m[(r, p)];
                    m[(r, p - 1)] += &add;
                    let sub = a * &m[(r, n + p - 1)];
                    m[(r, n + p)] -= &sub;
                }
            } else {
                for r in 0..2 * n {
                    let add = a * &m[(r, 2 * n - 1)];
                    m[(r, n - 1)] += &add;
                }
            }
        }
    }
    SymplecticElement::new(m).expect("generator products preserve the form")
}

/// The exact product over the staircase word.
pub fn u_star_product(params: &UStarParams) -> SymplecticElement {
    product_impl(params, false)
}

/// The same product with every y_n factor deleted; shares its upper-left
/// block with the full product.
pub fn u_star_product_y_n_deleted(params: &UStarParams) -> SymplecticElement {
    product_impl(params, true)
}

/// One minor identity: a computed minor next to its closed-form product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorIdentity {
    /// Row-anchor k: the C and A minors use rows k..n and columns 1..n-k+1,
    /// the Gram minor is the leading principal minor of order k.
    pub k: usize,
    pub c_minor_actual: Rational,
    pub c_minor_closed: Rational,
    pub a_minor_actual: Rational,
    pub a_minor_closed: Rational,
    pub gram_minor_actual: Rational,
    pub gram_minor_closed: Rational,
}

impl MinorIdentity {
    pub fn holds(&self) -> bool {
        self.c_minor_actual == self.c_minor_closed
            && self.a_minor_actual == self.a_minor_closed
            && self.gram_minor_actual == self.gram_minor_closed
    }
}

/// Closed form for the anti-diagonal block minor of C with rows n-m+1..n
/// and columns 1..m (written here by block size m):
/// prod_{p<=m} a_(n,p) times prod over strictly sub-diagonal staircase
/// entries a_(n-i+j,i) with j <= m < i, times the squares of those with
/// j < i <= m.
fn closed_c(params: &UStarParams, m: usize) -> Rational {
    let n = params.n;
    let mut out = Rational::one();
    for p in 1..=m {
        out *= params.get(n, p);
    }
    for i in 1..=n {
        for j in 1..i {
            if j <= m && m < i {
                out *= params.get(n - i + j, i);
            } else if i <= m {
                let v = params.get(n - i + j, i);
                out *= v;
                out *= v;
            }
        }
    }
    out
}

/// Closed form for the matching minor of A: the single staircase product
/// over pairs j <= m < i.
fn closed_a(params: &UStarParams, m: usize) -> Rational {
    let n = params.n;
    let mut out = Rational::one();
    for i in 1..=n {
        for j in 1..i {
            if j <= m && m < i {
                out *= params.get(n - i + j, i);
            }
        }
    }
    out
}

/// Closed form for the order-m leading principal minor of A^t C:
/// prod_{p<=m} a_(n,p) times the square of every strictly sub-diagonal
/// staircase entry with column j <= m.
fn closed_gram(params: &UStarParams, m: usize) -> Rational {
    let n = params.n;
    let mut out = Rational::one();
    for p in 1..=m {
        out *= params.get(n, p);
    }
    for i in 1..=n {
        for j in 1..i {
            if j <= m {
                let v = params.get(n - i + j, i);
                out *= v;
                out *= v;
            }
        }
    }
    out
}

/// Computes, for each k = 1..n, the three minors of the product and their
/// closed forms.
pub fn minor_identity_report(params: &UStarParams) -> Vec<MinorIdentity> {
    let n = params.n;
    let u = u_star_product(params);
    let (a, _, c, _) = u.blocks();
    let gram = &a.transpose() * &c;
    (1..=n)
        .map(|k| {
            let m = n - k + 1;
            let anti_rows: Vec<usize> = (k..=n).collect();
            let anti_cols: Vec<usize> = (1..=m).collect();
            let lead: Vec<usize> = (1..=k).collect();
            MinorIdentity {
                k,
                c_minor_actual: minor(&c, &anti_rows, &anti_cols).expect("index sets in range"),
                c_minor_closed: closed_c(params, m),
                a_minor_actual: minor(&a, &anti_rows, &anti_cols).expect("index sets in range"),
                a_minor_closed: closed_a(params, m),
                gram_minor_actual: minor(&gram, &lead, &lead).expect("index sets in range"),
                gram_minor_closed: closed_gram(params, k),
            }
        })
        .collect()
}

/// With every a_(n,q) positive and the rest nonzero, A^t C of the product
/// is positive definite; returns that predicate after checking the
/// parameter signs.
pub fn theorem_dense_check(params: &UStarParams) -> Result<bool, SymplecticError> {
    params.check_positive_slice()?;
    let (a, _, c, _) = u_star_product(params).blocks();
    let gram = &a.transpose() * &c;
    Ok(is_positive_definite(&gram).expect("gram of a symplectic element is symmetric"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::gen_y;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn params_n2(a21: i64, a12: i64, a22: i64) -> UStarParams {
        UStarParams::from_pairs(
            2,
            &[
                ((2, 1), q(a21)),
                ((1, 2), q(a12)),
                ((2, 2), q(a22)),
            ],
        )
        .unwrap()
    }

    /// Dense reference product, multiplying full generator matrices.
    fn dense_product(params: &UStarParams, skip_final_row: bool) -> SymplecticElement {
        let n = params.n();
        let mut acc = SymplecticElement::identity(n);
        for q in 1..=n {
            for p in (n + 1 - q)..=n {
                if skip_final_row && p == n {
                    continue;
                }
                acc = acc.mul(&gen_y(p, params.get(p, q), n).unwrap());
            }
        }
        acc
    }

    fn pseudo_params(n: usize, seed: u64) -> UStarParams {
        // Small deterministic nonzero rationals.
        let pool = [1i64, 2, -1, 3, -2, 5, -3, 7];
        let mut state = seed;
        let mut pairs = Vec::new();
        for (p, q) in UStarParams::index_set(n) {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = pool[(state >> 33) as usize % pool.len()];
            let den = 1 + (state >> 51) as i64 % 3;
            pairs.push(((p, q), Rational::new(num, den).unwrap()));
        }
        UStarParams::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn rank_one_product() {
        let p = UStarParams::from_pairs(1, &[((1, 1), q(5))]).unwrap();
        let u = u_star_product(&p);
        let expected = crate::matrix::RationalMatrix::from_i64_rows(&[&[1, 0], &[5, 1]]);
        assert_eq!(u.matrix(), &expected);
    }

    #[test]
    fn rank_two_product_example() {
        let u = u_star_product(&params_n2(1, 2, 3));
        let expected = crate::matrix::RationalMatrix::from_i64_rows(&[
            &[1, 0, 0, 0],
            &[2, 1, 0, 0],
            &[0, -6, 1, -2],
            &[2, 4, 0, 1],
        ]);
        assert_eq!(u.matrix(), &expected);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            UStarParams::from_pairs(2, &[((1, 1), q(1))]),
            Err(SymplecticError::BadParameterIndex { p: 1, q: 1, .. })
        ));
        assert!(matches!(
            UStarParams::from_pairs(2, &[((2, 1), q(1)), ((1, 2), q(1))]),
            Err(SymplecticError::MissingParameter { p: 2, q: 2 })
        ));
    }

    #[test]
    fn zero_parameter_keeps_element_symplectic() {
        let p = params_n2(1, 0, 3);
        // Construction inside u_star_product re-checks the form identity.
        let u = u_star_product(&p);
        assert!(!p.in_dense_cell());
        assert_eq!(u.matrix()[(1, 0)], q(0));
    }

    #[test]
    fn sparse_matches_dense_product() {
        for n in 1..=5 {
            for seed in 0..12 {
                let p = pseudo_params(n, seed + 1000 * n as u64);
                assert_eq!(u_star_product(&p), dense_product(&p, false), "n={n} seed={seed}");
                assert_eq!(
                    u_star_product_y_n_deleted(&p),
                    dense_product(&p, true),
                    "n={n} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn lower_block_is_anti_triangular() {
        for n in 2..=5 {
            for seed in 0..8 {
                let p = pseudo_params(n, 7 * seed + n as u64);
                let (_, _, c, _) = u_star_product(&p).blocks();
                for row in 1..=n {
                    for col in 1..=n {
                        if row + col < n + 1 {
                            assert!(c[(row - 1, col - 1)].is_zero(), "n={n} C[{row},{col}]");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deleting_final_row_keeps_upper_left_block() {
        for n in 1..=5 {
            for seed in 0..8 {
                let p = pseudo_params(n, 31 * seed + n as u64);
                let (a_full, _, _, _) = u_star_product(&p).blocks();
                let (a_cut, _, _, _) = u_star_product_y_n_deleted(&p).blocks();
                assert_eq!(a_full, a_cut, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn minor_identities_worked_example() {
        let report = minor_identity_report(&params_n2(1, 2, 3));
        assert_eq!(report.len(), 2);
        // k = 2: the 1x1 corner minors.
        assert_eq!(report[1].c_minor_actual, q(2));
        assert_eq!(report[1].c_minor_closed, q(2));
        assert_eq!(report[1].a_minor_actual, q(2));
        // k = 1: gram minor of order 1; k = 2: full determinant.
        assert_eq!(report[0].gram_minor_actual, q(4));
        assert_eq!(report[1].gram_minor_actual, q(12));
        assert!(report.iter().all(MinorIdentity::holds));
    }

    #[test]
    fn minor_identities_random_params() {
        for n in 1..=5 {
            for seed in 0..10 {
                let p = pseudo_params(n, 113 * seed + n as u64);
                let report = minor_identity_report(&p);
                for entry in &report {
                    assert!(entry.holds(), "n={n} seed={seed} k={}: {entry:?}", entry.k);
                }
                // The Gram minor of order k factors through the two
                // anti-diagonal minors of complementary anchor.
                for k in 1..=n {
                    let g = &report[k - 1].gram_minor_actual;
                    let a = &report[n - k].a_minor_actual;
                    let c = &report[n - k].c_minor_actual;
                    assert_eq!(g.clone(), a * c, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn dense_theorem_examples() {
        assert!(theorem_dense_check(&params_n2(1, 2, 3)).unwrap());
        // Sign of an off-slice parameter is irrelevant: it only enters
        // squared.
        assert!(theorem_dense_check(&params_n2(1, -2, 3)).unwrap());
        let (a, _, c, _) = u_star_product(&params_n2(1, -2, 3)).blocks();
        let gram = &a.transpose() * &c;
        let expected =
            crate::matrix::RationalMatrix::from_i64_rows(&[&[4, -2], &[-2, 4]]);
        assert_eq!(gram, expected);

        assert!(matches!(
            theorem_dense_check(&params_n2(-1, 2, 3)),
            Err(SymplecticError::ParameterSign { p: 2, q: 1, .. })
        ));
    }

    #[test]
    fn dense_theorem_random_positive_slice() {
        for n in 1..=5 {
            for seed in 0..10 {
                let mut pairs = Vec::new();
                let base = pseudo_params(n, 271 * seed + n as u64);
                for (&(p, q), v) in base.iter() {
                    let v = if p == n {
                        let w = v.clone().abs();
                        if w.is_zero() {
                            Rational::one()
                        } else {
                            w
                        }
                    } else {
                        v.clone()
                    };
                    pairs.push(((p, q), v));
                }
                let params = UStarParams::from_pairs(n, &pairs).unwrap();
                assert!(theorem_dense_check(&params).unwrap(), "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let p = params_n2(1, 2, 3);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":2,"a":{"1,2":"2","2,1":"1","2,2":"3"}}"#);
        let back: UStarParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<UStarParams>(r#"{"n":2,"a":{"1,1":"1"}}"#).is_err());
    }
}
