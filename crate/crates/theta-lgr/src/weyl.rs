//! The hyperoctahedral Weyl group as signed permutations, with the coset
//! combinatorics used by the stratification.
//!
//! Elements are bijections w of {±1, ..., ±n} with w(-i) = -w(i), stored by
//! their images on 1..=n. Generators are the adjacent transpositions
//! s_1..s_(n-1) together with the sign flip t at position n; a word denotes
//! t by the letter n. Composition is (u o v)(i) = u(v(i)), so a word acts on
//! points right to left.
//!
//! Length is the number of positive roots mapped to negative ones, counted
//! directly from the image; reduced words come from greedy descent stripping
//! and the two are cross-checked in the test suite.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::WeylError;

/// Letters 1..=n-1 are adjacent transpositions, the letter n is the sign
/// flip at position n.
pub type Word = Vec<usize>;

/// A subset of {1..n} naming the minimal coset representative `w_K`.
pub type CosetIndex = BTreeSet<usize>;

/// Index k of the double coset containing `x_k`.
pub type DoubleCosetIndex = usize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    image: Vec<i64>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Result<Self, WeylError> {
        if n == 0 {
            return Err(WeylError::RankZero);
        }
        Ok(SignedPermutation {
            image: (1..=n as i64).collect(),
        })
    }

    /// Builds from the images of 1..=n; absolute values must be a permutation.
    pub fn from_image(image: Vec<i64>) -> Result<Self, WeylError> {
        let n = image.len();
        if n == 0 {
            return Err(WeylError::RankZero);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            let a = v.unsigned_abs() as usize;
            if v == 0 || a > n || seen[a - 1] {
                return Err(WeylError::MalformedPermutation(format!("{image:?}")));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { image })
    }

    /// The generator s_i for i < n, or t for i = n.
    pub fn generator(n: usize, i: usize) -> Result<Self, WeylError> {
        if n == 0 {
            return Err(WeylError::RankZero);
        }
        if i == 0 || i > n {
            return Err(WeylError::LetterOutOfRange { index: i, rank: n });
        }
        let mut w = Self::identity(n)?;
        if i == n {
            w.image[n - 1] = -(n as i64);
        } else {
            w.image.swap(i - 1, i);
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[i64] {
        &self.image
    }

    /// Value at any point of {±1..±n}.
    pub fn apply(&self, x: i64) -> i64 {
        let a = x.unsigned_abs() as usize;
        assert!(a >= 1 && a <= self.rank(), "point {x} out of range");
        let y = self.image[a - 1];
        if x < 0 {
            -y
        } else {
            y
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i as i64 + 1)
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut image = vec![0i64; n];
        for i in 1..=n as i64 {
            let v = self.image[(i - 1) as usize];
            let a = v.unsigned_abs() as usize;
            image[a - 1] = if v < 0 { -i } else { i };
        }
        SignedPermutation { image }
    }

    /// Coxeter length: positive roots sent to negative ones. The three root
    /// families (e_i - e_j, e_i + e_j, 2e_i) are counted case by case from
    /// the signs and magnitudes of the image.
    pub fn length(&self) -> usize {
        let n = self.rank();
        let w = &self.image;
        let mut count = w.iter().filter(|&&v| v < 0).count();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (w[i], w[j]);
                // Root e_i - e_j.
                let diff_neg = match (a > 0, b > 0) {
                    (true, true) => a > b,
                    (true, false) => false,
                    (false, true) => true,
                    (false, false) => b.abs() > a.abs(),
                };
                // Root e_i + e_j.
                let sum_neg = match (a > 0, b > 0) {
                    (true, true) => false,
                    (true, false) => a > b.abs(),
                    (false, true) => b > a.abs(),
                    (false, false) => true,
                };
                count += usize::from(diff_neg) + usize::from(sum_neg);
            }
        }
        count
    }

    /// Generators g with length(g o w) < length(w), ascending.
    pub fn left_descents(&self) -> Vec<usize> {
        let n = self.rank();
        let len = self.length();
        (1..=n)
            .filter(|&i| {
                let g = SignedPermutation::generator(n, i).expect("valid generator");
                compose(&g, self).length() < len
            })
            .collect()
    }

    /// A reduced word, built by repeatedly stripping the smallest left
    /// descent. Its length equals `self.length()`.
    pub fn reduced_word(&self) -> Word {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while !w.is_identity() {
            let i = *w.left_descents().first().expect("non-identity element has a descent");
            let g = SignedPermutation::generator(w.rank(), i).expect("valid generator");
            w = compose(&g, &w);
            word.push(i);
        }
        word
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation{:?}", self.image)
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.image.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignedPermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let image = Vec::<i64>::deserialize(deserializer)?;
        SignedPermutation::from_image(image).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Composition (u o v)(i) = u(v(i)).
pub fn compose(u: &SignedPermutation, v: &SignedPermutation) -> SignedPermutation {
    assert_eq!(u.rank(), v.rank(), "rank mismatch in compose");
    let image = (1..=v.rank() as i64).map(|i| u.apply(v.apply(i))).collect();
    SignedPermutation { image }
}

/// Evaluates a word left to right: word (a, b, c) gives g_a o g_b o g_c.
pub fn word_to_perm(word: &[usize], n: usize) -> Result<SignedPermutation, WeylError> {
    let mut acc = SignedPermutation::identity(n)?;
    for &letter in word {
        let g = SignedPermutation::generator(n, letter)?;
        acc = compose(&acc, &g);
    }
    Ok(acc)
}

fn check_subset(k: &CosetIndex, n: usize) -> Result<(), WeylError> {
    if n == 0 {
        return Err(WeylError::RankZero);
    }
    for &e in k {
        if e == 0 || e > n {
            return Err(WeylError::SubsetOutOfRange { element: e, rank: n });
        }
    }
    Ok(())
}

/// The word for `w_K`: factors k, k+1, ..., n taken over K in decreasing
/// order. This concatenation is reduced.
pub fn w_k_word(k: &CosetIndex, n: usize) -> Result<Word, WeylError> {
    check_subset(k, n)?;
    let mut word = Vec::new();
    for &kk in k.iter().rev() {
        word.extend(kk..=n);
    }
    Ok(word)
}

/// Minimal-length representative `w_K` of its coset modulo the parabolic
/// subgroup generated by s_1..s_(n-1).
pub fn build_w_k(k: &CosetIndex, n: usize) -> Result<SignedPermutation, WeylError> {
    word_to_perm(&w_k_word(k, n)?, n)
}

/// Minimal-length double coset representative `x_k`, k in 0..=n.
pub fn build_x_k(k: DoubleCosetIndex, n: usize) -> Result<SignedPermutation, WeylError> {
    if k > n {
        return Err(WeylError::CosetPositionOutOfRange(k, n));
    }
    let set: CosetIndex = (n - k + 1..=n).collect();
    build_w_k(&set, n)
}

/// The K with w W_J = w_K W_J: absolute values of the negated images.
pub fn coset_index_of(w: &SignedPermutation) -> CosetIndex {
    w.image()
        .iter()
        .filter(|&&v| v < 0)
        .map(|&v| v.unsigned_abs() as usize)
        .collect()
}

/// The k with W_J w W_J = W_J x_k W_J.
pub fn double_coset_index_of(w: &SignedPermutation) -> DoubleCosetIndex {
    coset_index_of(w).len()
}

/// The profile f_K(j) = j - #(K intersect {1..j}) for j = 1..=n.
pub fn f_invariant(k: &CosetIndex, n: usize) -> Result<Vec<usize>, WeylError> {
    check_subset(k, n)?;
    let mut out = Vec::with_capacity(n);
    let mut below = 0;
    for j in 1..=n {
        if k.contains(&j) {
            below += 1;
        }
        out.push(j - below);
    }
    Ok(out)
}

/// The same profile from its counting definition
/// f(j) = #{i : 1 <= i <= n, 0 <= w(i) <= j}; used as a cross-check.
pub fn f_invariant_by_count(w: &SignedPermutation) -> Vec<usize> {
    let n = w.rank();
    (1..=n as i64)
        .map(|j| w.image().iter().filter(|&&v| v >= 0 && v <= j).count())
        .collect()
}

/// Bruhat comparison of minimal coset representatives:
/// w_K <= w_L iff #(K intersect {1..j}) <= #(L intersect {1..j}) for all j.
pub fn bruhat_leq_cosets(k: &CosetIndex, l: &CosetIndex, n: usize) -> Result<bool, WeylError> {
    check_subset(k, n)?;
    check_subset(l, n)?;
    let mut ck = 0;
    let mut cl = 0;
    for j in 1..=n {
        ck += usize::from(k.contains(&j));
        cl += usize::from(l.contains(&j));
        if ck > cl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complement in {1..n}; satisfies w_0 w_K W_J = w_(K dual) W_J.
pub fn dual_index(k: &CosetIndex, n: usize) -> Result<CosetIndex, WeylError> {
    check_subset(k, n)?;
    Ok((1..=n).filter(|j| !k.contains(j)).collect())
}

/// Maximum length over the coset w_K W_J.
pub fn max_length_single(k: &CosetIndex, n: usize) -> Result<usize, WeylError> {
    check_subset(k, n)?;
    let sum: usize = k.iter().sum();
    Ok((n + 1) * k.len() - sum + n * (n - 1) / 2)
}

/// Maximum length over the double coset W_J x_k W_J.
pub fn max_length_double(k: DoubleCosetIndex, n: usize) -> Result<usize, WeylError> {
    if k > n {
        return Err(WeylError::CosetPositionOutOfRange(k, n));
    }
    Ok(n * (n - 1) / 2 + k * (k + 1) / 2 + n * k - k * k)
}

/// Outcome of multiplying `w_K` by a generator on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeftMultiplyOutcome {
    /// s_i w_K is again a minimal representative, of the returned index.
    Coset(CosetIndex),
    /// s_i w_K = w_K s_j for the returned j in 1..n.
    RightFactor(usize),
}

/// Predicts s_i * w_K without computing the product.
///
/// When i and i+1 are on the same side of K the generator passes through to
/// the right, shifted by how many elements of K sit strictly below i.
pub fn left_multiply_w_k(i: usize, k: &CosetIndex, n: usize) -> Result<LeftMultiplyOutcome, WeylError> {
    check_subset(k, n)?;
    if i == 0 || i > n {
        return Err(WeylError::LetterOutOfRange { index: i, rank: n });
    }
    if i == n {
        let mut out = k.clone();
        if !out.remove(&n) {
            out.insert(n);
        }
        return Ok(LeftMultiplyOutcome::Coset(out));
    }
    let has_i = k.contains(&i);
    let has_next = k.contains(&(i + 1));
    let below = k.iter().filter(|&&e| e < i).count();
    match (has_i, has_next) {
        (false, true) => {
            let mut out = k.clone();
            out.remove(&(i + 1));
            out.insert(i);
            Ok(LeftMultiplyOutcome::Coset(out))
        }
        (true, false) => {
            let mut out = k.clone();
            out.remove(&i);
            out.insert(i + 1);
            Ok(LeftMultiplyOutcome::Coset(out))
        }
        (true, true) => Ok(LeftMultiplyOutcome::RightFactor(n - 1 - below)),
        (false, false) => Ok(LeftMultiplyOutcome::RightFactor(i - below)),
    }
}

/// The coroot reflection sequence of a reduced word, each entry as integer
/// coefficients over the simple coroots.
///
/// Entry j is obtained from the j-th letter's simple coroot by applying the
/// later letters in ascending position order; every entry is a positive
/// coroot and together they enumerate the inversions of the word's element.
pub fn reflection_sequence(word: &[usize], n: usize) -> Result<Vec<Vec<i64>>, WeylError> {
    let w = word_to_perm(word, n)?;
    let len = w.length();
    if len != word.len() {
        return Err(WeylError::NotReduced {
            got: word.len(),
            expect: len,
        });
    }
    let simple_coroot = |i: usize| -> Vec<i64> {
        // In the orthogonal basis: e_i - e_(i+1) for i < n, e_n for i = n.
        let mut v = vec![0i64; n];
        v[i - 1] = 1;
        if i < n {
            v[i] = -1;
        }
        v
    };
    let apply = |letter: usize, v: &mut Vec<i64>| {
        if letter == n {
            v[n - 1] = -v[n - 1];
        } else {
            v.swap(letter - 1, letter);
        }
    };
    let mut out = Vec::with_capacity(word.len());
    for j in 0..word.len() {
        let mut v = simple_coroot(word[j]);
        for &later in &word[j + 1..] {
            apply(later, &mut v);
        }
        // Convert to simple-coroot coordinates: partial sums of the
        // orthogonal coordinates, the last running over all of them.
        let mut coeffs = Vec::with_capacity(n);
        let mut acc = 0i64;
        for (idx, &vi) in v.iter().enumerate() {
            acc += vi;
            if idx < n - 1 {
                coeffs.push(acc);
            }
        }
        coeffs.push(v.iter().sum());
        out.push(coeffs);
    }
    Ok(out)
}

/// Longest element: i maps to -i.
pub fn longest_element(n: usize) -> Result<SignedPermutation, WeylError> {
    SignedPermutation::from_image((1..=n as i64).map(|i| -i).collect())
}

/// All 2^n n! elements, for brute-force oracles at small rank.
pub fn enumerate_group(n: usize) -> Vec<SignedPermutation> {
    let mut perms: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = (1..=n as i64).collect();
    permute(&mut current, 0, &mut perms);
    let mut out = Vec::with_capacity(perms.len() << n);
    for p in perms {
        for mask in 0u32..(1 << n) {
            let image = p
                .iter()
                .enumerate()
                .map(|(i, &v)| if mask & (1 << i) != 0 { -v } else { v })
                .collect();
            out.push(SignedPermutation { image });
        }
    }
    out
}

/// The parabolic subgroup generated by s_1..s_(n-1): all sign-preserving
/// elements.
pub fn enumerate_parabolic(n: usize) -> Vec<SignedPermutation> {
    let mut perms: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = (1..=n as i64).collect();
    permute(&mut current, 0, &mut perms);
    perms.into_iter().map(|image| SignedPermutation { image }).collect()
}

fn permute(v: &mut Vec<i64>, start: usize, out: &mut Vec<Vec<i64>>) {
    if start == v.len() {
        out.push(v.clone());
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permute(v, start + 1, out);
        v.swap(start, i);
    }
}

/// Every reduced word of `w`, by recursive descent stripping. Exponential in
/// general; intended for small rank oracles.
pub fn all_reduced_words(w: &SignedPermutation) -> Vec<Word> {
    if w.is_identity() {
        return vec![Vec::new()];
    }
    let n = w.rank();
    let mut out = Vec::new();
    for i in w.left_descents() {
        let g = SignedPermutation::generator(n, i).expect("valid generator");
        for mut tail in all_reduced_words(&compose(&g, w)) {
            tail.insert(0, i);
            out.push(tail);
        }
    }
    out
}

/// Uniformly random element.
pub fn random_element(n: usize, rng: &mut impl Rng) -> Result<SignedPermutation, WeylError> {
    if n == 0 {
        return Err(WeylError::RankZero);
    }
    let mut values: Vec<i64> = (1..=n as i64).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        values.swap(i, j);
    }
    for v in &mut values {
        if rng.gen_bool(0.5) {
            *v = -*v;
        }
    }
    Ok(SignedPermutation { image: values })
}

/// A random reduced word of `w`, stripping a uniformly chosen descent each
/// step.
pub fn random_reduced_word(w: &SignedPermutation, rng: &mut impl Rng) -> Word {
    let n = w.rank();
    let mut cur = w.clone();
    let mut word = Vec::with_capacity(w.length());
    while !cur.is_identity() {
        let descents = cur.left_descents();
        let i = descents[rng.gen_range(0..descents.len())];
        let g = SignedPermutation::generator(n, i).expect("valid generator");
        cur = compose(&g, &cur);
        word.push(i);
    }
    word
}

/// All subsets of {1..n}, in mask order.
pub fn all_subsets(n: usize) -> Vec<CosetIndex> {
    (0u32..(1 << n))
        .map(|mask| (1..=n).filter(|&j| mask & (1 << (j - 1)) != 0).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(elems: &[usize]) -> CosetIndex {
        elems.iter().copied().collect()
    }

    #[test]
    fn word_example_rank_three() {
        // Word (2, 3) at n = 3 is s_2 o t.
        let w = word_to_perm(&[2, 3], 3).unwrap();
        assert_eq!(w.image(), &[1, 3, -2]);
        let s2 = SignedPermutation::generator(3, 2).unwrap();
        let t = SignedPermutation::generator(3, 3).unwrap();
        assert_eq!(compose(&s2, &t), w);
    }

    #[test]
    fn word_example_rank_two() {
        let w = word_to_perm(&[2, 1, 2], 2).unwrap();
        assert_eq!(w.image(), &[-2, -1]);
        assert_eq!(w.length(), 3);
    }

    #[test]
    fn longest_element_length_is_n_squared() {
        for n in 1..=5 {
            assert_eq!(longest_element(n).unwrap().length(), n * n);
        }
        assert_eq!(longest_element(2).unwrap().length(), 4);
    }

    #[test]
    fn generator_lengths_are_one() {
        for n in 1..=4 {
            for i in 1..=n {
                assert_eq!(SignedPermutation::generator(n, i).unwrap().length(), 1);
            }
        }
    }

    #[test]
    fn build_w_k_examples() {
        let w = build_w_k(&set(&[2]), 3).unwrap();
        assert_eq!(w.image(), &[1, 3, -2]);
        assert_eq!(coset_index_of(&w), set(&[2]));

        let full = build_w_k(&set(&[1, 2]), 2).unwrap();
        assert_eq!(full.image(), &[-2, -1]);

        assert_eq!(w_k_word(&set(&[1, 2]), 2).unwrap(), vec![2, 1, 2]);
    }

    #[test]
    fn x_k_recurrence() {
        // x_0 = e, x_1 = t, x_(i+1) = t s_(n-1) ... s_(n-i) x_i.
        for n in 1..=5 {
            let mut x = SignedPermutation::identity(n).unwrap();
            assert_eq!(build_x_k(0, n).unwrap(), x);
            for i in 0..n {
                let mut step = vec![n];
                step.extend(((n - i)..=(n - 1)).rev());
                let m = word_to_perm(&step, n).unwrap();
                x = compose(&m, &x);
                assert_eq!(build_x_k(i + 1, n).unwrap(), x, "n={n} k={}", i + 1);
            }
        }
        assert_eq!(
            build_x_k(1, 3).unwrap(),
            SignedPermutation::generator(3, 3).unwrap()
        );
    }

    #[test]
    fn f_invariant_examples() {
        assert_eq!(f_invariant(&set(&[2]), 3).unwrap(), vec![1, 1, 2]);
        // Full index set: every image is negative, so every count is zero.
        for n in 1..=5 {
            let full: CosetIndex = (1..=n).collect();
            assert_eq!(f_invariant(&full, n).unwrap(), vec![0; n]);
            assert_eq!(
                f_invariant_by_count(&build_w_k(&full, n).unwrap()),
                vec![0; n]
            );
        }
        assert_eq!(f_invariant(&set(&[1]), 4).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn bruhat_examples() {
        assert!(bruhat_leq_cosets(&set(&[3]), &set(&[1]), 3).unwrap());
        assert!(!bruhat_leq_cosets(&set(&[1]), &set(&[3]), 3).unwrap());
        assert!(bruhat_leq_cosets(&set(&[]), &set(&[2]), 3).unwrap());
        assert!(bruhat_leq_cosets(&set(&[2]), &set(&[2]), 3).unwrap());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_index(&set(&[2]), 3).unwrap(), set(&[1, 3]));
        let w0 = longest_element(3).unwrap();
        for k in all_subsets(3) {
            let w = build_w_k(&k, 3).unwrap();
            assert_eq!(coset_index_of(&compose(&w0, &w)), dual_index(&k, 3).unwrap());
        }
    }

    #[test]
    fn double_coset_duality() {
        // W_J w_0 x_k W_J = W_J x_(n-k) W_J.
        for n in 1..=5 {
            let w0 = longest_element(n).unwrap();
            for k in 0..=n {
                let x = build_x_k(k, n).unwrap();
                assert_eq!(double_coset_index_of(&compose(&w0, &x)), n - k);
            }
        }
    }

    #[test]
    fn max_length_examples() {
        assert_eq!(max_length_single(&set(&[]), 2).unwrap(), 1);
        assert_eq!(max_length_single(&set(&[1]), 2).unwrap(), 3);
        assert_eq!(max_length_double(0, 3).unwrap(), 3);
        assert_eq!(max_length_double(1, 2).unwrap(), 3);
        for n in 1..=5 {
            assert_eq!(max_length_double(n, n).unwrap(), n * n);
        }
    }

    #[test]
    fn reduced_word_round_trip() {
        for n in 1..=4 {
            for w in enumerate_group(n) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(word_to_perm(&word, n).unwrap(), w);
            }
        }
    }

    #[test]
    fn reflection_sequence_closed_form() {
        // For the stacked word of the longest minimal representative, entry
        // i(i-1)/2 + j is a_j + .. + a_(i-1) + 2a_i + .. + 2a_n for j < i,
        // and entry i(i+1)/2 is a_i + .. + a_n.
        for n in 2..=4 {
            let full: CosetIndex = (1..=n).collect();
            let mut word = Vec::new();
            for i in 1..=n {
                word.extend((n + 1 - i)..=n);
            }
            assert_eq!(word, w_k_word(&full, n).unwrap());
            let seq = reflection_sequence(&word, n).unwrap();
            assert_eq!(seq.len(), n * (n + 1) / 2);
            for i in 1..=n {
                for j in 1..=i {
                    let expected: Vec<i64> = (1..=n)
                        .map(|m| {
                            if j < i {
                                if m >= j && m < i {
                                    1
                                } else if m >= i {
                                    2
                                } else {
                                    0
                                }
                            } else {
                                i64::from(m >= i)
                            }
                        })
                        .collect();
                    let pos = i * (i - 1) / 2 + j - 1;
                    assert_eq!(seq[pos], expected, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn reflection_sequence_entries_are_positive_coroots() {
        for n in 2..=3 {
            for w in enumerate_group(n) {
                let word = w.reduced_word();
                let seq = reflection_sequence(&word, n).unwrap();
                assert_eq!(seq.len(), w.length());
                let mut distinct = std::collections::BTreeSet::new();
                for v in &seq {
                    assert!(v.iter().all(|&c| c >= 0), "negative coroot in {v:?}");
                    assert!(v.iter().any(|&c| c > 0));
                    distinct.insert(v.clone());
                }
                assert_eq!(distinct.len(), seq.len(), "repeated coroot for {w:?}");
            }
        }
    }

    #[test]
    fn reflection_sequence_rejects_non_reduced() {
        assert!(reflection_sequence(&[1, 1], 2).is_err());
        assert!(reflection_sequence(&[2, 1, 2, 1, 2], 2).is_err());
    }

    #[test]
    fn left_multiply_lemma_exhaustive_small_rank() {
        for n in 1..=5 {
            for k in all_subsets(n) {
                let wk = build_w_k(&k, n).unwrap();
                for i in 1..=n {
                    let g = SignedPermutation::generator(n, i).unwrap();
                    let product = compose(&g, &wk);
                    match left_multiply_w_k(i, &k, n).unwrap() {
                        LeftMultiplyOutcome::Coset(k2) => {
                            assert_eq!(product, build_w_k(&k2, n).unwrap(), "n={n} K={k:?} i={i}");
                        }
                        LeftMultiplyOutcome::RightFactor(j) => {
                            assert!(j >= 1 && j < n, "factor index out of range");
                            let sj = SignedPermutation::generator(n, j).unwrap();
                            assert_eq!(product, compose(&wk, &sj), "n={n} K={k:?} i={i}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn serde_signed_permutation() {
        let w = word_to_perm(&[2, 3], 3).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, "[1,3,-2]");
        let back: SignedPermutation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<SignedPermutation>("[1,1]").is_err());
        assert!(serde_json::from_str::<SignedPermutation>("[0,2]").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn compose_assoc_and_inverse(seed in 0u64..1000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (seed as usize % 5);
            let a = random_element(n, &mut rng).unwrap();
            let b = random_element(n, &mut rng).unwrap();
            let c = random_element(n, &mut rng).unwrap();
            prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
            prop_assert!(compose(&a, &a.inverse()).is_identity());
            prop_assert_eq!(a.inverse().length(), a.length());
        }

        #[test]
        fn f_invariant_formula_matches_count(seed in 0u64..500) {
            let n = 1 + (seed as usize % 6);
            let mask = (seed / 7) as u32 & ((1u32 << n) - 1);
            let k: CosetIndex = (1..=n).filter(|&j| mask & (1 << (j - 1)) != 0).collect();
            let w = build_w_k(&k, n).unwrap();
            prop_assert_eq!(f_invariant(&k, n).unwrap(), f_invariant_by_count(&w));
        }

        #[test]
        fn w_k_word_is_reduced(seed in 0u64..500) {
            let n = 1 + (seed as usize % 6);
            let mask = (seed / 7) as u32 & ((1u32 << n) - 1);
            let k: CosetIndex = (1..=n).filter(|&j| mask & (1 << (j - 1)) != 0).collect();
            let word = w_k_word(&k, n).unwrap();
            let w = word_to_perm(&word, n).unwrap();
            prop_assert_eq!(w.length(), word.len());
            let expected: usize = k.iter().map(|&kk| n - kk + 1).sum();
            prop_assert_eq!(word.len(), expected);
        }
    }
}
