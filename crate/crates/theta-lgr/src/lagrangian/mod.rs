//! Points of the Lagrangian Grassmannian LG(n, 2n) in the two-block matrix
//! model, with positivity tests, the full stratum classification, base
//! points, degeneration sequences, the Cayley chart, and the contractive
//! flow.
//!
//! A point is a 2n x n matrix of full column rank, read as top block A and
//! bottom block C with A^t C symmetric; two representatives describe the
//! same point when they differ by an invertible right factor. Everything
//! here is exact rational arithmetic except the witness search in
//! [`witness`].

pub mod plucker;
pub mod witness;

use serde::{Deserialize, Serialize};

use crate::error::LagrangianError;
use crate::linalg::{
    inverse, is_positive_definite, is_positive_semidefinite, ldl, rank, LdlFactorization,
};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::weyl::{bruhat_leq_cosets, dual_index, CosetIndex};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LagrangianPointWire", into = "LagrangianPointWire")]
pub struct LagrangianPoint {
    n: usize,
    rep: RationalMatrix,
}

#[derive(Serialize, Deserialize)]
struct LagrangianPointWire {
    n: usize,
    rep: RationalMatrix,
}

impl TryFrom<LagrangianPointWire> for LagrangianPoint {
    type Error = LagrangianError;
    fn try_from(w: LagrangianPointWire) -> Result<Self, Self::Error> {
        let p = LagrangianPoint::new(w.rep)?;
        if p.n != w.n {
            return Err(LagrangianError::BadShape {
                rows: 2 * w.n,
                cols: w.n,
            });
        }
        Ok(p)
    }
}

impl From<LagrangianPoint> for LagrangianPointWire {
    fn from(p: LagrangianPoint) -> LagrangianPointWire {
        LagrangianPointWire { n: p.n, rep: p.rep }
    }
}

impl LagrangianPoint {
    /// Validates shape 2n x n, full column rank, and symmetry of A^t C.
    pub fn new(rep: RationalMatrix) -> Result<Self, LagrangianError> {
        let (r, c) = (rep.rows(), rep.cols());
        if c == 0 || r != 2 * c {
            return Err(LagrangianError::BadShape { rows: r, cols: c });
        }
        let n = c;
        let got = rank(&rep);
        if got != n {
            return Err(LagrangianError::RankDeficient { rank: got, expected: n });
        }
        let p = LagrangianPoint { n, rep };
        if !p.gram().is_symmetric() {
            return Err(LagrangianError::NotLagrangian);
        }
        Ok(p)
    }

    /// The chart point [I; S] for a symmetric S.
    pub fn from_gram(s: &RationalMatrix) -> Result<Self, LagrangianError> {
        if !s.is_symmetric() {
            return Err(LagrangianError::NotLagrangian);
        }
        let n = s.rows();
        Ok(LagrangianPoint {
            n,
            rep: RationalMatrix::identity(n).vstack(s),
        })
    }

    fn from_blocks_unchecked(top: RationalMatrix, bottom: RationalMatrix) -> Self {
        let n = top.cols();
        let p = LagrangianPoint {
            n,
            rep: top.vstack(&bottom),
        };
        debug_assert!(rank(&p.rep) == n && p.gram().is_symmetric());
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &RationalMatrix {
        &self.rep
    }

    /// The top block A.
    pub fn top(&self) -> RationalMatrix {
        self.rep.row_slice(0, self.n)
    }

    /// The bottom block C.
    pub fn bottom(&self) -> RationalMatrix {
        self.rep.row_slice(self.n, 2 * self.n)
    }

    /// A^t C of the stored representative. Symmetric; re-representation
    /// changes it by congruence, so only its inertia is intrinsic.
    pub fn gram(&self) -> RationalMatrix {
        &self.top().transpose() * &self.bottom()
    }

    /// Re-represent by an invertible right factor; same point.
    pub fn right_translate(&self, g: &RationalMatrix) -> Result<Self, LagrangianError> {
        if rank(g) != self.n {
            return Err(LagrangianError::RankDeficient {
                rank: rank(g),
                expected: self.n,
            });
        }
        Ok(LagrangianPoint {
            n: self.n,
            rep: &self.rep * g,
        })
    }

    /// True iff the Gram pairing is positive semidefinite.
    pub fn is_theta_nonnegative(&self) -> bool {
        matches!(is_positive_semidefinite(&self.gram()), Ok(true))
    }

    /// True iff A is invertible and C A^(-1) is positive definite.
    pub fn is_theta_positive(&self) -> bool {
        match inverse(&self.top()) {
            Ok(a_inv) => {
                let s = &self.bottom() * &a_inv;
                matches!(is_positive_definite(&s), Ok(true))
            }
            Err(_) => false,
        }
    }

    /// The chart normal form S with p equivalent to [I; S]; requires A
    /// invertible.
    pub fn chart_form(&self) -> Result<RationalMatrix, LagrangianError> {
        let a_inv = inverse(&self.top()).map_err(|_| LagrangianError::NotInUnipotentChart)?;
        Ok(&self.bottom() * &a_inv)
    }
}

impl std::fmt::Debug for LagrangianPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LagrangianPoint(n={}, rep={:?})", self.n, self.rep)
    }
}

/// Same point: the stacked representatives span an n-dimensional space.
pub fn equivalent(p: &LagrangianPoint, q: &LagrangianPoint) -> bool {
    p.n == q.n && rank(&p.rep.hstack(&q.rep)) == p.n
}

/// The stratum base point with top block I with k trailing zeros and bottom
/// block I with n-l leading zeros.
pub fn base_point(k: usize, l: usize, n: usize) -> Result<LagrangianPoint, LagrangianError> {
    if k > l || l > n || n == 0 {
        return Err(LagrangianError::BadStratum { k, l, n });
    }
    let top = RationalMatrix::from_fn(n, n, |i, j| {
        if i == j && i < n - k {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let bottom = RationalMatrix::from_fn(n, n, |i, j| {
        if i == j && i >= n - l {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Ok(LagrangianPoint::from_blocks_unchecked(top, bottom))
}

/// The double-coset classification (k, l): k is the corank of A, l the rank
/// of C; both are representative-independent.
pub fn classify_double(p: &LagrangianPoint) -> (usize, usize) {
    let n = p.n();
    (n - rank(&p.top()), rank(&p.bottom()))
}

/// Recovers K from an incidence profile via #K below j = j - d(j).
fn profile_to_coset(d: &[usize]) -> Result<CosetIndex, LagrangianError> {
    let mut k = CosetIndex::new();
    let mut prev = 0;
    for (idx, &dj) in d.iter().enumerate() {
        let j = idx + 1;
        if dj == prev {
            k.insert(j);
        } else if dj != prev + 1 {
            return Err(LagrangianError::NoMatchingCoset(d.to_vec()));
        }
        prev = dj;
    }
    Ok(k)
}

/// The Schubert cell index K_plus, from the profile of intersection
/// dimensions with the standard flag: d(j) = n - rank(rows j+1..2n).
pub fn classify_schubert(p: &LagrangianPoint) -> Result<CosetIndex, LagrangianError> {
    let n = p.n();
    let d: Vec<usize> = (1..=n)
        .map(|j| n - rank(&p.rep().row_slice(j, 2 * n)))
        .collect();
    profile_to_coset(&d)
}

/// The opposite Schubert cell index K_minus. The opposite Borel fixes the
/// isotropic flag spanned by rows n+1, n+2, ..., so the profile deletes
/// those rows: d(j) = n - rank(rows outside n+1..n+j); the matching index
/// is then dualized so that codimension equals the coset length.
pub fn classify_opposite_schubert(p: &LagrangianPoint) -> Result<CosetIndex, LagrangianError> {
    let n = p.n();
    let d: Vec<usize> = (1..=n)
        .map(|j| {
            let kept = p.rep().row_slice(0, n).vstack(&p.rep().row_slice(n + j, 2 * n));
            n - rank(&kept)
        })
        .collect();
    let k = profile_to_coset(&d)?;
    Ok(dual_index(&k, n)?)
}

/// Full stratum data of a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSignature {
    pub k: usize,
    pub l: usize,
    #[serde(rename = "K_plus")]
    pub k_plus: CosetIndex,
    #[serde(rename = "K_minus")]
    pub k_minus: CosetIndex,
}

pub fn classify(p: &LagrangianPoint) -> Result<StratumSignature, LagrangianError> {
    let (k, l) = classify_double(p);
    Ok(StratumSignature {
        k,
        l,
        k_plus: classify_schubert(p)?,
        k_minus: classify_opposite_schubert(p)?,
    })
}

/// The Cholesky-cell index of a chart point: the pivot support of the LDL
/// factorization of its Gram form. Coincides with classify_schubert on the
/// nonnegative chart.
pub fn cell_index(p: &LagrangianPoint) -> Result<CosetIndex, LagrangianError> {
    let s = p.chart_form()?;
    let f = ldl(&s)?;
    Ok(f.support)
}

/// LDL data of a chart point's Gram form, for degeneration constructions.
pub fn cell_factorization(p: &LagrangianPoint) -> Result<LdlFactorization, LagrangianError> {
    Ok(ldl(&p.chart_form()?)?)
}

/// The theta-positive point with top block I with 1/p in the trailing k
/// slots and bottom block I with 1/p in the leading n-l slots; its
/// entrywise limit in p is the (k, l) base point.
pub fn approach_sequence(
    k: usize,
    l: usize,
    n: usize,
    p: u64,
) -> Result<LagrangianPoint, LagrangianError> {
    if k > l || l > n || n == 0 {
        return Err(LagrangianError::BadStratum { k, l, n });
    }
    if p == 0 {
        return Err(LagrangianError::SequenceParameterZero);
    }
    let small = Rational::new(1, p as i64).expect("p >= 1");
    let top = RationalMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Rational::zero()
        } else if i < n - k {
            Rational::one()
        } else {
            small.clone()
        }
    });
    let bottom = RationalMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Rational::zero()
        } else if i >= n - l {
            Rational::one()
        } else {
            small.clone()
        }
    });
    Ok(LagrangianPoint::from_blocks_unchecked(top, bottom))
}

fn closure_blocks(
    k: usize,
    l: usize,
    kp: usize,
    lp: usize,
    n: usize,
    middle: Rational,
) -> LagrangianPoint {
    let top = RationalMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Rational::zero()
        } else if i < n - kp {
            Rational::one()
        } else if i < n - k {
            middle.clone()
        } else {
            Rational::zero()
        }
    });
    let bottom = RationalMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Rational::zero()
        } else if i < n - l {
            Rational::zero()
        } else if i < n - lp {
            middle.clone()
        } else {
            Rational::one()
        }
    });
    LagrangianPoint::from_blocks_unchecked(top, bottom)
}

fn check_closure_pair(
    k: usize,
    l: usize,
    kp: usize,
    lp: usize,
    n: usize,
) -> Result<(), LagrangianError> {
    if !(k <= kp && kp <= lp && lp <= l && l <= n) || n == 0 {
        return Err(LagrangianError::BadClosurePair { k, l, kp, lp });
    }
    Ok(())
}

/// A theta-nonnegative point of stratum (k, l) converging entrywise, as
/// p grows, to a point of the boundary stratum (k', l').
pub fn closure_deformation(
    k: usize,
    l: usize,
    kp: usize,
    lp: usize,
    n: usize,
    p: u64,
) -> Result<LagrangianPoint, LagrangianError> {
    check_closure_pair(k, l, kp, lp, n)?;
    if p == 0 {
        return Err(LagrangianError::SequenceParameterZero);
    }
    Ok(closure_blocks(
        k,
        l,
        kp,
        lp,
        n,
        Rational::new(1, p as i64).expect("p >= 1"),
    ))
}

/// The entrywise limit of the closure deformation; classifies to (k', l').
pub fn closure_deformation_limit(
    k: usize,
    l: usize,
    kp: usize,
    lp: usize,
    n: usize,
) -> Result<LagrangianPoint, LagrangianError> {
    check_closure_pair(k, l, kp, lp, n)?;
    Ok(closure_blocks(k, l, kp, lp, n, Rational::zero()))
}

/// The cell indices covered by L in the closure order: drop n, or slide
/// some i of L down to i+1.
pub fn covered_cell_indices(l: &CosetIndex, n: usize) -> Result<Vec<CosetIndex>, LagrangianError> {
    for &e in l {
        if e == 0 || e > n {
            return Err(LagrangianError::CellIndexOutOfRange { element: e, rank: n });
        }
    }
    let mut out = Vec::new();
    if l.contains(&n) {
        let mut k = l.clone();
        k.remove(&n);
        out.push(k);
    }
    for &i in l {
        if i < n && !l.contains(&(i + 1)) {
            let mut k = l.clone();
            k.remove(&i);
            k.insert(i + 1);
            out.push(k);
        }
    }
    Ok(out)
}

/// A chart point of cell L converging entrywise, as m grows, to the given
/// point q of a cell K covered by L.
///
/// The drop-n move adds a vanishing pivot at position n; the slide move
/// replaces the rank-one LDL summand at i+1 by one whose leading entry sits
/// at i and decays quadratically.
pub fn cell_degeneration(
    q: &LagrangianPoint,
    l: &CosetIndex,
    m: u64,
) -> Result<LagrangianPoint, LagrangianError> {
    if m == 0 {
        return Err(LagrangianError::SequenceParameterZero);
    }
    let n = q.n();
    let f = cell_factorization(q)?;
    let k = &f.support;
    if k == l {
        return Err(LagrangianError::BadCoveringMove(format!(
            "target index {l:?} equals the cell of the point"
        )));
    }
    let s = q.chart_form()?;
    let eps = Rational::new(1, m as i64).expect("m >= 1");

    let mut dropped = l.clone();
    dropped.remove(&n);
    if l.contains(&n) && &dropped == k {
        let mut s_m = s;
        s_m[(n - 1, n - 1)] += &eps;
        return LagrangianPoint::from_gram(&s_m);
    }

    // Slide move: find i in L with K = L minus {i} plus {i+1}.
    let slide = l.iter().copied().find(|&i| {
        i < n && !l.contains(&(i + 1)) && {
            let mut shifted = l.clone();
            shifted.remove(&i);
            shifted.insert(i + 1);
            &shifted == k
        }
    });
    let Some(i) = slide else {
        return Err(LagrangianError::BadCoveringMove(format!(
            "{l:?} does not cover {k:?}"
        )));
    };
    // Column i+1 of the unit lower factor and its pivot.
    let col = RationalMatrix::from_fn(n, 1, |r, _| f.unit_lower[(r, i)].clone());
    let d = f.diag[i].clone();
    let rank_one_old = (&col * &col.transpose()).scale(&d);
    let mut u = col.scale(&eps.recip().expect("eps nonzero"));
    u[(i - 1, 0)] = Rational::one();
    let scale = &(&d * &eps) * &eps;
    let rank_one_new = (&u * &u.transpose()).scale(&scale);
    let s_m = &(&s - &rank_one_old) + &rank_one_new;
    LagrangianPoint::from_gram(&s_m)
}

/// A symmetric chart matrix: the image of a Lagrangian point under the
/// Cayley-type chart through the diagonal basis v_i = e_i + e_(n+i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RationalMatrix", into = "RationalMatrix")]
pub struct ChartPoint {
    b: RationalMatrix,
}

impl ChartPoint {
    pub fn new(b: RationalMatrix) -> Result<Self, LagrangianError> {
        if !b.is_symmetric() {
            return Err(LagrangianError::ChartNotSymmetric);
        }
        Ok(ChartPoint { b })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.b
    }
}

impl TryFrom<RationalMatrix> for ChartPoint {
    type Error = LagrangianError;
    fn try_from(b: RationalMatrix) -> Result<Self, Self::Error> {
        ChartPoint::new(b)
    }
}

impl From<ChartPoint> for RationalMatrix {
    fn from(c: ChartPoint) -> RationalMatrix {
        c.b
    }
}

/// B = ((A - C)(A + C)^(-1))^t; defined whenever A + C is invertible, which
/// holds on the whole closed nonnegative region.
pub fn chart(p: &LagrangianPoint) -> Result<ChartPoint, LagrangianError> {
    let (a, c) = (p.top(), p.bottom());
    let sum_inv = inverse(&(&a + &c)).map_err(|_| LagrangianError::ChartDomain)?;
    let b = (&(&a - &c) * &sum_inv).transpose();
    ChartPoint::new(b)
}

/// The point [I + B^t; I - B^t] mapping back to p under `chart`.
pub fn unchart(b: &ChartPoint) -> LagrangianPoint {
    let id = RationalMatrix::identity(b.b.rows());
    let bt = b.b.transpose();
    LagrangianPoint::from_blocks_unchecked(&id + &bt, &id - &bt)
}

/// The contractive symplectic flow matrix with diagonal blocks
/// (c + 1/c)/2 I and off-diagonal blocks (c - 1/c)/2 I.
pub fn flow_matrix(c: &Rational, n: usize) -> Result<RationalMatrix, LagrangianError> {
    if !c.is_positive() {
        return Err(LagrangianError::FlowSpeedNotPositive(c.to_string()));
    }
    let c_inv = c.recip().expect("positive speed");
    let half = Rational::new(1, 2).expect("nonzero");
    let alpha = &(c + &c_inv) * &half;
    let beta = &(c - &c_inv) * &half;
    let n2 = 2 * n;
    Ok(RationalMatrix::from_fn(n2, n2, |i, j| {
        if i == j {
            alpha.clone()
        } else if i + n == j || j + n == i {
            beta.clone()
        } else {
            Rational::zero()
        }
    }))
}

/// Applies the flow at speed c > 0. Fixes nothing but contracts the chart:
/// the image of a theta-nonnegative point under any c > 1 is
/// theta-positive, and chart(flow(c, p)) = c^(-2) chart(p).
pub fn flow(c: &Rational, p: &LagrangianPoint) -> Result<LagrangianPoint, LagrangianError> {
    let m = flow_matrix(c, p.n())?;
    let rep = &m * p.rep();
    LagrangianPoint::new(rep)
}

/// Exact dimension of the Levi orbit through the (k, l) base point: the
/// rank of the linearized action into the tangent space, modulo motions
/// along the column space.
pub fn orbit_dimension(k: usize, l: usize, n: usize) -> Result<usize, LagrangianError> {
    if k > l || l > n || n == 0 {
        return Err(LagrangianError::BadStratum { k, l, n });
    }
    let r = base_point(k, l, n)?.rep().clone();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(2 * n * n);
    // Levi directions: xi_(a,b) = diag(E_ab, -E_ba) acting on the left.
    for a in 0..n {
        for b in 0..n {
            let mut v = vec![Rational::zero(); 2 * n * n];
            for j in 0..n {
                // Row a of the top image is row b of A; row n+b of the
                // bottom image is minus row a of C.
                v[a * n + j] = r[(b, j)].clone();
                v[(n + b) * n + j] = -&r[(n + a, j)];
            }
            rows.push(v);
        }
    }
    // Column motions R E_ab: column a of R placed at column b.
    for a in 0..n {
        for b in 0..n {
            let mut v = vec![Rational::zero(); 2 * n * n];
            for i in 0..2 * n {
                v[i * n + b] = r[(i, a)].clone();
            }
            rows.push(v);
        }
    }
    let stacked = RationalMatrix::from_rows(rows).expect("uniform row length");
    Ok(rank(&stacked) - n * n)
}

/// Closed-form dimension of the Richardson piece R_(K,L); requires
/// w_K <= w_L in Bruhat order.
pub fn dim_r_kl(k: &CosetIndex, l: &CosetIndex, n: usize) -> Result<usize, LagrangianError> {
    if !bruhat_leq_cosets(k, l, n)? {
        return Err(LagrangianError::IncomparableCosets(format!("{k:?} vs {l:?}")));
    }
    let sum_k: i64 = k.iter().map(|&x| x as i64).sum();
    let sum_l: i64 = l.iter().map(|&x| x as i64).sum();
    let value = (n as i64 + 1) * (l.len() as i64 - k.len() as i64) + sum_k - sum_l;
    assert!(value >= 0, "dimension formula must be nonnegative on comparable pairs");
    Ok(value as usize)
}
