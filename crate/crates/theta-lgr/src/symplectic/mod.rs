//! The rational symplectic group Sp_2n, its pinning by one-parameter
//! generators, Weyl lifts, and the theta-nonnegative monoid with its triple
//! factorization.
//!
//! Block conventions throughout: a 2n x 2n matrix g is written
//! [[A, B], [C, D]] with n x n blocks, and the form is
//! Omega = [[0, I], [-I, 0]]. Symplectic means g^t Omega g = Omega.

pub mod ustar;

use serde::{Deserialize, Serialize};

use crate::error::SymplecticError;
use crate::linalg::{inverse, is_positive_semidefinite, minor, rank};
use crate::matrix::{blocks, from_blocks, RationalMatrix};
use crate::rational::Rational;
use crate::weyl::SignedPermutation;

/// The form matrix Omega = [[0, I], [-I, 0]].
pub fn omega(n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = Rational::one();
        m[(n + i, i)] = -Rational::one();
    }
    m
}

/// A 2n x 2n rational matrix certified to preserve Omega.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RationalMatrix", into = "RationalMatrix")]
pub struct SymplecticElement {
    mat: RationalMatrix,
}

impl SymplecticElement {
    /// Checks the shape and the form-preservation identity exactly.
    pub fn new(mat: RationalMatrix) -> Result<Self, SymplecticError> {
        let (r, c) = (mat.rows(), mat.cols());
        if r != c || r % 2 != 0 || r == 0 {
            return Err(SymplecticError::NotEvenSquare { rows: r, cols: c });
        }
        let n = r / 2;
        let om = omega(n);
        if &(&mat.transpose() * &om) * &mat != om {
            return Err(SymplecticError::NotSymplectic);
        }
        Ok(SymplecticElement { mat })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticElement {
            mat: RationalMatrix::identity(2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.mat.rows() / 2
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.mat
    }

    /// The four n x n blocks (A, B, C, D).
    pub fn blocks(&self) -> (RationalMatrix, RationalMatrix, RationalMatrix, RationalMatrix) {
        blocks(&self.mat)
    }

    pub fn mul(&self, other: &SymplecticElement) -> SymplecticElement {
        assert_eq!(self.n(), other.n(), "rank mismatch in symplectic product");
        SymplecticElement {
            mat: &self.mat * &other.mat,
        }
    }

    /// g^(-1) = -Omega g^t Omega; exact, no elimination needed.
    pub fn inverse(&self) -> SymplecticElement {
        let om = omega(self.n());
        SymplecticElement {
            mat: -&(&(&om * &self.mat.transpose()) * &om),
        }
    }
}

impl std::fmt::Debug for SymplecticElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymplecticElement({:?})", self.mat)
    }
}

impl TryFrom<RationalMatrix> for SymplecticElement {
    type Error = SymplecticError;
    fn try_from(mat: RationalMatrix) -> Result<Self, Self::Error> {
        SymplecticElement::new(mat)
    }
}

impl From<SymplecticElement> for RationalMatrix {
    fn from(g: SymplecticElement) -> RationalMatrix {
        g.mat
    }
}

/// Nilpotent raising generator: e_i = E_(i,i+1) - E_(n+i+1,n+i) for i < n,
/// e_n = E_(n,2n). Indices are 1-based here.
fn raising_generator(i: usize, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(2 * n, 2 * n);
    if i == n {
        m[(n - 1, 2 * n - 1)] = Rational::one();
    } else {
        m[(i - 1, i)] = Rational::one();
        m[(n + i, n + i - 1)] = -Rational::one();
    }
    m
}

/// x_i(a) = exp(a e_i) = I + a e_i, since e_i squares to zero.
pub fn gen_x(i: usize, a: &Rational, n: usize) -> Result<SymplecticElement, SymplecticError> {
    if i == 0 || i > n || n == 0 {
        return Err(SymplecticError::GeneratorOutOfRange { index: i, rank: n });
    }
    let e = raising_generator(i, n);
    debug_assert!((&e * &e).is_zero(), "raising generator must be 2-step nilpotent");
    let mat = &RationalMatrix::identity(2 * n) + &e.scale(a);
    Ok(SymplecticElement { mat })
}

/// y_i(a) = gen_x(i, a) transposed.
pub fn gen_y(i: usize, a: &Rational, n: usize) -> Result<SymplecticElement, SymplecticError> {
    let x = gen_x(i, a, n)?;
    Ok(SymplecticElement {
        mat: x.mat.transpose(),
    })
}

/// diag(a_1..a_n, a_1^(-1)..a_n^(-1)).
pub fn torus(diag: &[Rational]) -> Result<SymplecticElement, SymplecticError> {
    if diag.is_empty() {
        return Err(SymplecticError::GeneratorOutOfRange { index: 0, rank: 0 });
    }
    let n = diag.len();
    let mut m = RationalMatrix::zeros(2 * n, 2 * n);
    for (i, a) in diag.iter().enumerate() {
        if a.is_zero() {
            return Err(SymplecticError::TorusZeroEntry);
        }
        m[(i, i)] = a.clone();
        m[(n + i, n + i)] = a.recip().expect("nonzero entry");
    }
    Ok(SymplecticElement { mat: m })
}

/// The lift of a single generator: s_i goes to x_i(-1) y_i(1) x_i(-1).
pub fn lift_generator(i: usize, n: usize) -> Result<SymplecticElement, SymplecticError> {
    let minus_one = -Rational::one();
    let x = gen_x(i, &minus_one, n)?;
    let y = gen_y(i, &Rational::one(), n)?;
    Ok(x.mul(&y).mul(&x))
}

/// The lift of a word, multiplying generator lifts left to right.
pub fn lift_word(word: &[usize], n: usize) -> Result<SymplecticElement, SymplecticError> {
    let mut acc = SymplecticElement::identity(n);
    for &letter in word {
        acc = acc.mul(&lift_generator(letter, n)?);
    }
    Ok(acc)
}

/// The lift of a Weyl element along one of its reduced words. The result
/// does not depend on which reduced word is chosen.
pub fn lift_matrix(w: &SignedPermutation) -> SymplecticElement {
    lift_word(&w.reduced_word(), w.rank()).expect("reduced word letters are in range")
}

fn is_psd_or_false(m: &RationalMatrix) -> bool {
    matches!(is_positive_semidefinite(m), Ok(true))
}

/// Membership in the theta-nonnegative monoid: block D invertible with
/// C D^t and D^t B both positive semidefinite.
pub fn is_in_theta_monoid(g: &SymplecticElement) -> bool {
    let n = g.n();
    let (_, b, c, d) = g.blocks();
    if rank(&d) != n {
        return false;
    }
    let dt = d.transpose();
    is_psd_or_false(&(&c * &dt)) && is_psd_or_false(&(&dt * &b))
}

/// The factors of g = u_minus * torus_part * u_plus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFactorization {
    /// [[I, 0], [S, I]] with S = C A^(-1) positive semidefinite.
    pub u_minus: SymplecticElement,
    /// diag(A, A^(-t)) with det(A) > 0.
    pub torus_part: SymplecticElement,
    /// [[I, T], [0, I]] with T = A^(-1) B positive semidefinite.
    pub u_plus: SymplecticElement,
}

impl ThetaFactorization {
    pub fn product(&self) -> SymplecticElement {
        self.u_minus.mul(&self.torus_part).mul(&self.u_plus)
    }
}

/// Anchored triple factorization of a monoid element with invertible A.
///
/// The two unipotent blocks come out symmetric automatically; the PSD and
/// determinant-sign side conditions are verified, and their failure reports
/// the element as lying outside the monoid's identity component.
pub fn theta_triple_factor(g: &SymplecticElement) -> Result<ThetaFactorization, SymplecticError> {
    let n = g.n();
    let (a, b, c, _) = g.blocks();
    let a_inv = inverse(&a).map_err(|_| SymplecticError::SingularBlock)?;
    let s = &c * &a_inv;
    let t = &a_inv * &b;
    assert!(s.is_symmetric() && t.is_symmetric(), "symplectic identities force symmetry");
    if !is_psd_or_false(&s) {
        return Err(SymplecticError::FactorCheck(
            "lower factor C A^(-1) is not positive semidefinite".into(),
        ));
    }
    if !is_psd_or_false(&t) {
        return Err(SymplecticError::FactorCheck(
            "upper factor A^(-1) B is not positive semidefinite".into(),
        ));
    }
    let all: Vec<usize> = (1..=n).collect();
    let det_a = minor(&a, &all, &all).expect("square block");
    if !det_a.is_positive() {
        return Err(SymplecticError::FactorCheck(
            "block A has non-positive determinant".into(),
        ));
    }
    let id = RationalMatrix::identity(n);
    let zero = RationalMatrix::zeros(n, n);
    let u_minus = SymplecticElement {
        mat: from_blocks(&id, &zero, &s, &id),
    };
    let u_plus = SymplecticElement {
        mat: from_blocks(&id, &t, &zero, &id),
    };
    let torus_part = SymplecticElement {
        mat: from_blocks(&a, &zero, &zero, &a_inv.transpose()),
    };
    Ok(ThetaFactorization {
        u_minus,
        torus_part,
        u_plus,
    })
}
