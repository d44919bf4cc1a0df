//! Exact arithmetic for the theta-positive structure of the Lagrangian
//! Grassmannian LG(n, 2n).
//!
//! The crate models points as 2n x n rational matrices of full column rank
//! whose two n x n blocks have a symmetric pairing, and certifies
//! positivity questions about them without floating point: the positive
//! and nonnegative regions, the double stratification by block ranks, the
//! Schubert-type cell indices, generalized Plucker coordinates and their
//! sign classes, closure degenerations, and a contractive symplectic flow.
//! Supporting layers provide big-rational linear algebra
//! (fraction-free elimination, LDL with pivot supports, character
//! polynomial sign tests), the signed permutation groups with their coset
//! combinatorics, and the symplectic group with its theta monoid and
//! closed-form minor identities for lower-unipotent products.
//!
//! The one deliberate exception to exactness is [`lagrangian::witness`]:
//! orbit witnesses need square roots, so they are computed in f64 and
//! always returned with a checked residual.
//!
//! ```
//! use theta_lgr::lagrangian::{classify, LagrangianPoint};
//! use theta_lgr::matrix::RationalMatrix;
//!
//! let s = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
//! let p = LagrangianPoint::from_gram(&s)?;
//! assert!(p.is_theta_nonnegative() && !p.is_theta_positive());
//!
//! let sig = classify(&p)?;
//! assert_eq!((sig.k, sig.l), (0, 1));
//! # Ok::<(), theta_lgr::error::LagrangianError>(())
//! ```

pub mod error;
pub mod lagrangian;
pub mod linalg;
pub mod matrix;
pub mod rational;
pub mod sample;
pub mod symplectic;
pub mod verify;
pub mod weyl;

pub use error::{LagrangianError, LinalgError, SymplecticError, WeylError};
pub use lagrangian::{LagrangianPoint, StratumSignature};
pub use matrix::RationalMatrix;
pub use rational::Rational;
pub use symplectic::SymplecticElement;
pub use weyl::SignedPermutation;
