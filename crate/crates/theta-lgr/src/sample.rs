//! Seeded random generators for test corpora: rational matrices with small
//! entries, points of prescribed strata and cells, and monoid elements.
//!
//! Entries are drawn from a small integer box so that exact arithmetic
//! stays fast; every generator takes the RNG explicitly, so fixed seeds
//! give reproducible corpora across threads and runs.

use rand::Rng;

use crate::error::LagrangianError;
use crate::lagrangian::{base_point, LagrangianPoint};
use crate::linalg::{det, inverse, rank};
use crate::matrix::{from_blocks, RationalMatrix};
use crate::rational::Rational;
use crate::symplectic::{self, SymplecticElement};
use crate::symplectic::ustar::UStarParams;
use crate::weyl::CosetIndex;

/// A rational with numerator in -4..=4 and denominator in 1..=3.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3)).expect("positive denominator")
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let x = random_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn positive_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=4), rng.gen_range(1..=3)).expect("positive denominator")
}

pub fn rational_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> RationalMatrix {
    let entries: Vec<Vec<Rational>> = (0..rows)
        .map(|_| (0..cols).map(|_| random_rational(rng)).collect())
        .collect();
    RationalMatrix::from_fn(rows, cols, |i, j| entries[i][j].clone())
}

pub fn symmetric_matrix<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = random_rational(rng);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// G^t G for a random G with between 0 and n rows, so every PSD rank
/// occurs.
pub fn psd_matrix<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    let r = rng.gen_range(0..=n);
    if r == 0 {
        return RationalMatrix::zeros(n, n);
    }
    let g = rational_matrix(r, n, rng);
    &g.transpose() * &g
}

pub fn invertible_matrix<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    loop {
        let m = rational_matrix(n, n, rng);
        if rank(&m) == n {
            return m;
        }
    }
}

pub fn det_positive_matrix<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    let mut m = invertible_matrix(n, rng);
    if det(&m).expect("square").is_negative() {
        for i in 0..n {
            m[(i, 0)] = -&m[(i, 0)];
        }
    }
    m
}

/// A random point of the exact stratum (k, l): the base point moved by a
/// block-diagonal action diag(g, g^(-t)) with det g > 0.
pub fn stratum_point<R: Rng>(
    k: usize,
    l: usize,
    n: usize,
    rng: &mut R,
) -> Result<LagrangianPoint, LagrangianError> {
    let base = base_point(k, l, n)?;
    let g = det_positive_matrix(n, rng);
    let g_inv_t = inverse(&g).expect("invertible").transpose();
    let rep = (&g * &base.top()).vstack(&(&g_inv_t * &base.bottom()));
    LagrangianPoint::new(rep)
}

/// A random chart point of the Cholesky cell K: Gram form L D L^t with
/// unit lower L supported below the K columns and pivots positive exactly
/// on K.
pub fn cell_point<R: Rng>(
    k: &CosetIndex,
    n: usize,
    rng: &mut R,
) -> Result<LagrangianPoint, LagrangianError> {
    for &e in k {
        if e == 0 || e > n {
            return Err(LagrangianError::CellIndexOutOfRange { element: e, rank: n });
        }
    }
    let mut lower = RationalMatrix::identity(n);
    let mut diag = vec![Rational::zero(); n];
    for &j in k {
        diag[j - 1] = positive_rational(rng);
        for i in j..n {
            lower[(i, j - 1)] = random_rational(rng);
        }
    }
    let s = &(&lower * &RationalMatrix::diagonal(&diag)) * &lower.transpose();
    LagrangianPoint::from_gram(&s)
}

/// A theta-positive chart point [I; G^t G + I].
pub fn interior_point<R: Rng>(n: usize, rng: &mut R) -> LagrangianPoint {
    let g = rational_matrix(n, n, rng);
    let s = &(&g.transpose() * &g) + &RationalMatrix::identity(n);
    LagrangianPoint::from_gram(&s).expect("PD Gram form")
}

/// A random theta-nonnegative point, mixing interior points, PSD chart
/// points, and exact boundary strata.
pub fn nonnegative_point<R: Rng>(n: usize, rng: &mut R) -> LagrangianPoint {
    match rng.gen_range(0..3) {
        0 => interior_point(n, rng),
        1 => LagrangianPoint::from_gram(&psd_matrix(n, rng)).expect("PSD is symmetric"),
        _ => {
            let l = rng.gen_range(0..=n);
            let k = rng.gen_range(0..=l);
            stratum_point(k, l, n, rng).expect("valid stratum")
        }
    }
}

/// An arbitrary point: a random symmetric chart point pushed around by a
/// short random word of symplectic generators, then re-represented. Not
/// confined to any positivity region and frequently outside the chart.
pub fn random_lagrangian<R: Rng>(n: usize, rng: &mut R) -> LagrangianPoint {
    let s = symmetric_matrix(n, rng);
    let mut rep = RationalMatrix::identity(n).vstack(&s);
    let moves = rng.gen_range(0..4);
    for _ in 0..moves {
        let i = rng.gen_range(1..=n);
        let m = match rng.gen_range(0..3) {
            0 => symplectic::gen_x(i, &random_rational(rng), n),
            1 => symplectic::gen_y(i, &random_rational(rng), n),
            _ => symplectic::lift_generator(i, n),
        }
        .expect("generator index in range");
        rep = m.matrix() * &rep;
    }
    let g = invertible_matrix(n, rng);
    LagrangianPoint::new(&rep * &g).expect("symplectic moves preserve the point invariants")
}

/// A triple product u_minus * torus * u_plus with PSD off-diagonal data
/// and a determinant-positive torus block; always lies in the monoid.
pub fn random_theta_monoid_element<R: Rng>(n: usize, rng: &mut R) -> SymplecticElement {
    let s = psd_matrix(n, rng);
    let t = psd_matrix(n, rng);
    let h = det_positive_matrix(n, rng);
    let id = RationalMatrix::identity(n);
    let zero = RationalMatrix::zeros(n, n);
    let u_minus = SymplecticElement::new(from_blocks(&id, &zero, &s, &id)).expect("symplectic");
    let u_plus = SymplecticElement::new(from_blocks(&id, &t, &zero, &id)).expect("symplectic");
    let h_inv_t = inverse(&h).expect("invertible").transpose();
    let torus = SymplecticElement::new(from_blocks(&h, &zero, &zero, &h_inv_t))
        .expect("symplectic");
    u_minus.mul(&torus).mul(&u_plus)
}

/// Parameters with every entry nonzero.
pub fn u_star_params<R: Rng>(n: usize, rng: &mut R) -> UStarParams {
    let a = UStarParams::index_set(n)
        .into_iter()
        .map(|(p, q)| ((p, q), nonzero_rational(rng)))
        .collect();
    UStarParams::new(n, a).expect("full index set")
}

/// Parameters with the final-row slice positive and the rest nonzero, the
/// hypothesis of the dense positivity criterion.
pub fn u_star_params_positive_slice<R: Rng>(n: usize, rng: &mut R) -> UStarParams {
    let a = UStarParams::index_set(n)
        .into_iter()
        .map(|(p, q)| {
            let v = if p == n {
                positive_rational(rng)
            } else {
                nonzero_rational(rng)
            };
            ((p, q), v)
        })
        .collect();
    UStarParams::new(n, a).expect("full index set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=3 {
            assert_eq!(rational_matrix(n, n, &mut a), rational_matrix(n, n, &mut b));
            assert_eq!(
                nonnegative_point(n, &mut a).rep(),
                nonnegative_point(n, &mut b).rep()
            );
            assert_eq!(u_star_params(n, &mut a), u_star_params(n, &mut b));
        }
    }

    #[test]
    fn structured_samples_satisfy_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for _ in 0..10 {
                let s = psd_matrix(n, &mut rng);
                assert!(crate::linalg::is_positive_semidefinite(&s).unwrap());
                let m = det_positive_matrix(n, &mut rng);
                assert!(det(&m).unwrap().is_positive());
                assert!(interior_point(n, &mut rng).is_theta_positive());
                assert!(nonnegative_point(n, &mut rng).is_theta_nonnegative());
                let g = random_theta_monoid_element(n, &mut rng);
                assert!(symplectic::is_in_theta_monoid(&g));
            }
        }
    }
}
