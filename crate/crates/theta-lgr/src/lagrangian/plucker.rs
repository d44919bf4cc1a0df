//! Generalized Plucker coordinates on the admissible row subsets, their
//! sign normalization, and the support list.
//!
//! An n-subset of {1..2n} is admissible when it never contains both j and
//! n+j. A point has one coordinate per admissible subset: a signed n x n
//! minor of its representative. The whole vector is defined up to one
//! global scalar, so sign data is intrinsic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::LagrangianError;
use crate::lagrangian::LagrangianPoint;
use crate::linalg::minor;
use crate::rational::Rational;

/// All admissible n-subsets in lexicographic order; there are 2^n.
pub fn admissible_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << n) {
        let mut subset: Vec<usize> = (1..=n)
            .map(|j| if mask >> (j - 1) & 1 == 1 { n + j } else { j })
            .collect();
        subset.sort_unstable();
        out.insert(subset);
    }
    out.into_iter().collect()
}

/// Class label of a row: d(k) = k for top rows, k - n for bottom rows.
fn class_of(k: usize, n: usize) -> usize {
    if k <= n {
        k
    } else {
        k - n
    }
}

/// Parity sign of an admissible subset: -1 to the number of pairs p < q
/// whose class labels invert.
pub fn subset_sign(subset: &[usize], n: usize) -> i32 {
    let d: Vec<usize> = subset.iter().map(|&k| class_of(k, n)).collect();
    let mut inversions = 0usize;
    for p in 0..d.len() {
        for q in p + 1..d.len() {
            if d[p] > d[q] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signed minor vector over the admissible subsets. Always holds every
/// admissible key, zeros included, and is never identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Rational>", into = "BTreeMap<String, Rational>")]
pub struct PluckerVector {
    n: usize,
    coords: BTreeMap<Vec<usize>, Rational>,
}

impl PluckerVector {
    pub fn new(
        n: usize,
        coords: BTreeMap<Vec<usize>, Rational>,
    ) -> Result<Self, LagrangianError> {
        let expected = admissible_subsets(n);
        if coords.len() != expected.len()
            || !expected.iter().all(|s| coords.contains_key(s))
        {
            let offending = coords
                .keys()
                .find(|k| !expected.contains(*k))
                .cloned()
                .unwrap_or_default();
            return Err(LagrangianError::BadAdmissibleSubset(offending));
        }
        if coords.values().all(Rational::is_zero) {
            return Err(LagrangianError::ZeroPluckerVector);
        }
        Ok(PluckerVector { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.coords
    }

    pub fn get(&self, subset: &[usize]) -> Option<&Rational> {
        self.coords.get(subset)
    }

    /// Rescales every coordinate by a nonzero scalar; same point.
    pub fn scale(&self, c: &Rational) -> Result<Self, LagrangianError> {
        if c.is_zero() {
            return Err(LagrangianError::ZeroPluckerVector);
        }
        Ok(PluckerVector {
            n: self.n,
            coords: self.coords.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        })
    }

    pub fn sign_class(&self) -> SignClass {
        let mut pos = 0usize;
        let mut neg = 0usize;
        let mut zero = 0usize;
        for v in self.coords.values() {
            match v.signum() {
                1 => pos += 1,
                -1 => neg += 1,
                _ => zero += 1,
            }
        }
        if zero == 0 && (pos == 0 || neg == 0) {
            SignClass::Positive
        } else if pos == 0 || neg == 0 {
            SignClass::Nonnegative
        } else {
            SignClass::Mixed
        }
    }

    /// The support: admissible subsets with nonzero coordinate.
    pub fn support(&self) -> BTreeSet<Vec<usize>> {
        self.coords
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k.clone())
            .collect()
    }
}

fn parse_subset_key(key: &str) -> Result<Vec<usize>, LagrangianError> {
    let parts: Result<Vec<usize>, _> = key.split(',').map(|t| t.trim().parse()).collect();
    parts.map_err(|_| LagrangianError::BadAdmissibleSubset(Vec::new()))
}

impl TryFrom<BTreeMap<String, Rational>> for PluckerVector {
    type Error = LagrangianError;
    fn try_from(wire: BTreeMap<String, Rational>) -> Result<Self, Self::Error> {
        let mut coords = BTreeMap::new();
        let mut n = 0usize;
        for (key, value) in wire {
            let subset = parse_subset_key(&key)?;
            n = subset.len();
            coords.insert(subset, value);
        }
        PluckerVector::new(n, coords)
    }
}

impl From<PluckerVector> for BTreeMap<String, Rational> {
    fn from(v: PluckerVector) -> BTreeMap<String, Rational> {
        v.coords
            .into_iter()
            .map(|(k, val)| {
                let key = k
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                (key, val)
            })
            .collect()
    }
}

/// Sign pattern of a coordinate vector after quotienting by the global
/// scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Positive,
    Nonnegative,
    Mixed,
}

impl std::fmt::Display for SignClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SignClass::Positive => "positive",
            SignClass::Nonnegative => "nonnegative",
            SignClass::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// The signed minor vector of a point. Full column rank guarantees some
/// admissible minor survives, so this never fails on a valid point.
pub fn plucker(p: &LagrangianPoint) -> PluckerVector {
    let n = p.n();
    let cols: Vec<usize> = (1..=n).collect();
    let mut coords = BTreeMap::new();
    for subset in admissible_subsets(n) {
        let m = minor(p.rep(), &subset, &cols).expect("admissible subsets index valid minors");
        let sign = Rational::from_integer(subset_sign(&subset, n) as i64);
        coords.insert(subset, &sign * &m);
    }
    PluckerVector::new(n, coords)
        .expect("a full-rank Lagrangian representative has a nonzero admissible minor")
}

pub fn plucker_sign_class(p: &LagrangianPoint) -> SignClass {
    plucker(p).sign_class()
}

/// The Gelfand-Serganova list: admissible subsets with nonvanishing
/// coordinate. Encodes the matroid stratum of the point.
pub fn gs_list(p: &LagrangianPoint) -> BTreeSet<Vec<usize>> {
    plucker(p).support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{base_point, classify_double};
    use crate::linalg::det;
    use crate::matrix::RationalMatrix as M;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn chart_point(rows: &[&[i64]]) -> LagrangianPoint {
        LagrangianPoint::from_gram(&M::from_i64_rows(rows)).unwrap()
    }

    #[test]
    fn admissible_subset_counts() {
        assert_eq!(admissible_subsets(1), vec![vec![1], vec![2]]);
        assert_eq!(
            admissible_subsets(2),
            vec![vec![1, 2], vec![1, 4], vec![2, 3], vec![3, 4]]
        );
        for n in 1..=6 {
            let subsets = admissible_subsets(n);
            assert_eq!(subsets.len(), 1 << n);
            for s in &subsets {
                assert_eq!(s.len(), n);
                for j in 1..=n {
                    assert!(s.contains(&j) ^ s.contains(&(n + j)));
                }
            }
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(subset_sign(&[1, 2], 2), 1);
        assert_eq!(subset_sign(&[1, 4], 2), 1);
        assert_eq!(subset_sign(&[2, 3], 2), -1);
        assert_eq!(subset_sign(&[3, 4], 2), 1);
        assert_eq!(subset_sign(&[2, 3, 4], 3), 1);
    }

    #[test]
    fn rank_one_coordinates() {
        let p = LagrangianPoint::new(M::from_i64_rows(&[&[3], &[5]])).unwrap();
        let v = plucker(&p);
        assert_eq!(v.get(&[1]), Some(&q(3)));
        assert_eq!(v.get(&[2]), Some(&q(5)));
    }

    #[test]
    fn chart_coordinates_are_principal_minors() {
        let s = M::from_i64_rows(&[&[1, 2], &[2, 5]]);
        let v = plucker(&LagrangianPoint::from_gram(&s).unwrap());
        assert_eq!(v.get(&[1, 2]), Some(&q(1)));
        assert_eq!(v.get(&[1, 4]), Some(&q(5)));
        assert_eq!(v.get(&[2, 3]), Some(&q(1)));
        assert_eq!(v.get(&[3, 4]), Some(&q(1)));

        // General pattern: the coordinate whose bottom classes form V is
        // the principal minor of S on V.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            let s = crate::sample::symmetric_matrix(n, &mut rng);
            let v = plucker(&LagrangianPoint::from_gram(&s).unwrap());
            for subset in admissible_subsets(n) {
                let bottom: Vec<usize> = subset
                    .iter()
                    .filter(|&&k| k > n)
                    .map(|&k| k - n)
                    .collect();
                let expected = if bottom.is_empty() {
                    q(1)
                } else {
                    minor(&s, &bottom, &bottom).unwrap()
                };
                assert_eq!(v.get(&subset), Some(&expected), "n={n} subset={subset:?}");
            }
        }
    }

    #[test]
    fn sign_class_examples() {
        assert_eq!(
            plucker_sign_class(&chart_point(&[&[1, 0], &[0, 1]])),
            SignClass::Positive
        );
        let v = plucker(&chart_point(&[&[1, 1], &[1, 1]]));
        assert_eq!(v.get(&[3, 4]), Some(&q(0)));
        assert_eq!(v.sign_class(), SignClass::Nonnegative);

        let v = plucker(&chart_point(&[&[0, 1], &[1, 0]]));
        assert_eq!(v.get(&[1, 2]), Some(&q(1)));
        assert_eq!(v.get(&[1, 4]), Some(&q(0)));
        assert_eq!(v.get(&[2, 3]), Some(&q(0)));
        assert_eq!(v.get(&[3, 4]), Some(&q(-1)));
        assert_eq!(v.sign_class(), SignClass::Mixed);

        // A common negative scalar is still one strict sign.
        let neg = LagrangianPoint::new(M::from_i64_rows(&[&[-1], &[-1]])).unwrap();
        assert_eq!(plucker_sign_class(&neg), SignClass::Positive);
    }

    #[test]
    fn gs_list_examples() {
        let full = gs_list(&chart_point(&[&[1, 0], &[0, 1]]));
        assert_eq!(full.len(), 4);
        let degenerate = gs_list(&chart_point(&[&[1, 1], &[1, 1]]));
        assert_eq!(degenerate.len(), 3);
        assert!(!degenerate.contains(&vec![3, 4]));
        let base = gs_list(&base_point(1, 1, 2).unwrap());
        assert_eq!(base, BTreeSet::from([vec![1, 4]]));
    }

    #[test]
    fn serde_round_trip() {
        let v = plucker(&chart_point(&[&[1, 2], &[2, 5]]));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"1,2":"1","1,4":"5","2,3":"1","3,4":"1"}"#);
        let back: PluckerVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);

        let all_zero = r#"{"1":"0","2":"0"}"#;
        assert!(serde_json::from_str::<PluckerVector>(all_zero).is_err());
        let bad_subset = r#"{"1,3":"1","2,4":"1","1,2":"0","3,4":"0"}"#;
        assert!(serde_json::from_str::<PluckerVector>(bad_subset).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn right_translation_scales_by_det(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (seed as usize % 4);
            let p = crate::sample::random_lagrangian(n, &mut rng);
            let g = crate::sample::invertible_matrix(n, &mut rng);
            let d = det(&g).unwrap();
            let lhs = plucker(&p.right_translate(&g).unwrap());
            let rhs = plucker(&p).scale(&d).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sign_class_tracks_theta(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (seed as usize % 3);
            let p = crate::sample::random_lagrangian(n, &mut rng);
            let class = plucker_sign_class(&p);
            prop_assert_eq!(class == SignClass::Positive, p.is_theta_positive());
            prop_assert_eq!(class != SignClass::Mixed, p.is_theta_nonnegative());
            let (k, l) = classify_double(&p);
            prop_assert!(k <= l);
        }
    }
}
