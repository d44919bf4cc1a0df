//! Error types, grouped by domain.

use thiserror::Error;

/// Failures of exact linear algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal {0:?}")]
    MalformedRational(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index out of bounds: {0}")]
    IndexOutOfBounds(String),
    #[error("row and column index sets must have equal size")]
    MinorSizeMismatch,
    #[error("duplicate index in selection")]
    DuplicateIndex,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
}

/// Failures of signed-permutation and word operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("rank must be at least 1")]
    RankZero,
    #[error("generator index {index} out of range 1..={rank}")]
    LetterOutOfRange { index: usize, rank: usize },
    #[error("image is not a valid signed permutation: {0}")]
    MalformedPermutation(String),
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("subset element {element} out of range 1..={rank}")]
    SubsetOutOfRange { element: usize, rank: usize },
    #[error("word of length {got} is not reduced (element has length {expect})")]
    NotReduced { got: usize, expect: usize },
    #[error("coset position {0} out of range 0..={1}")]
    CosetPositionOutOfRange(usize, usize),
}

/// Failures of symplectic-group operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("matrix must be square of even size, got {rows}x{cols}")]
    NotEvenSquare { rows: usize, cols: usize },
    #[error("matrix does not satisfy the symplectic condition M^t O M = O")]
    NotSymplectic,
    #[error("generator index {index} out of range 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("torus entries must be nonzero")]
    TorusZeroEntry,
    #[error("element is outside the positive monoid: {0}")]
    OutsideMonoid(String),
    #[error("block A is singular")]
    SingularBlock,
    #[error("factorization check failed: {0}")]
    FactorCheck(String),
    #[error("parameter ({p},{q}) out of the triangular index range for rank {rank}")]
    BadParameterIndex { p: usize, q: usize, rank: usize },
    #[error("missing parameter ({p},{q})")]
    MissingParameter { p: usize, q: usize },
    #[error("parameter ({p},{q}) violates the sign precondition: {reason}")]
    ParameterSign { p: usize, q: usize, reason: String },
}

/// Failures of Lagrangian Grassmannian operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LagrangianError {
    #[error("representative must be a 2n x n matrix with n >= 1, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("violated invariant: representative has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("violated invariant: A^t C is not symmetric (plane is not Lagrangian)")]
    NotLagrangian,
    #[error("stratum indices must satisfy 0 <= k <= l <= n, got k={k}, l={l}, n={n}")]
    BadStratum { k: usize, l: usize, n: usize },
    #[error("cell index element {element} out of range 1..={rank}")]
    CellIndexOutOfRange { element: usize, rank: usize },
    #[error("point is not in the closed nonnegative region: {0}")]
    NotThetaNonnegative(String),
    #[error("no coset index matches the incidence profile {0:?}")]
    NoMatchingCoset(Vec<usize>),
    #[error("chart undefined: A + C is singular")]
    ChartDomain,
    #[error("top block is singular; point lies outside the unipotent chart")]
    NotInUnipotentChart,
    #[error("chart matrix must be symmetric")]
    ChartNotSymmetric,
    #[error("flow speed must be positive, got {0}")]
    FlowSpeedNotPositive(String),
    #[error("sequence parameter p must be positive")]
    SequenceParameterZero,
    #[error("closure pair requires k <= k' <= l' <= l, got ({k},{l}) -> ({kp},{lp})")]
    BadClosurePair { k: usize, l: usize, kp: usize, lp: usize },
    #[error("covering move does not apply: {0}")]
    BadCoveringMove(String),
    #[error("all admissible coordinates vanish; representative is degenerate")]
    ZeroPluckerVector,
    #[error("subset {0:?} is not an admissible coordinate label")]
    BadAdmissibleSubset(Vec<usize>),
    #[error("witness residual {achieved:e} exceeds tolerance {tolerance:e}")]
    WitnessResidual { achieved: f64, tolerance: f64 },
    #[error("witness construction failed: {0}")]
    WitnessConstruction(String),
    #[error("coset indices are incomparable in Bruhat order: {0}")]
    IncomparableCosets(String),
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error("coset index failure: {0}")]
    Weyl(#[from] WeylError),
}
