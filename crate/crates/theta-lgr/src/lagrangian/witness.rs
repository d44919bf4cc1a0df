//! Floating-point construction of an orbit witness: a determinant-positive
//! g whose block-diagonal symplectic lift carries the stratum base point
//! onto a given theta-nonnegative point.
//!
//! Everything else in the crate is exact; this module alone uses f64,
//! because the congruence normalization needs square roots. Its output is
//! always residual-checked, and every membership claim it supports is
//! certified separately by the exact classifiers.

use serde::{Deserialize, Serialize};

use crate::error::LagrangianError;
use crate::lagrangian::{classify_double, LagrangianPoint};
use crate::linalg::{is_positive_definite, kernel_basis, rank};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

type FMat = Vec<Vec<f64>>;

/// Approximate witness for the Levi-orbit membership of a point: the point
/// is within `residual` (relative, Frobenius) of the span of
/// [g restricted to the first n-k columns; g^(-t) restricted to the last l].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub k: usize,
    pub l: usize,
    pub g: FMat,
    pub residual: f64,
}

fn fzeros(r: usize, c: usize) -> FMat {
    vec![vec![0.0; c]; r]
}

fn fmatmul(a: &FMat, b: &FMat) -> FMat {
    let (r, inner) = (a.len(), b.len());
    let c = if inner == 0 { 0 } else { b[0].len() };
    let mut out = fzeros(r, c);
    for i in 0..r {
        for m in 0..inner {
            let av = a[i][m];
            if av == 0.0 {
                continue;
            }
            for j in 0..c {
                out[i][j] += av * b[m][j];
            }
        }
    }
    out
}

fn ftranspose(a: &FMat) -> FMat {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let mut out = fzeros(c, r);
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j];
        }
    }
    out
}

fn frobenius(a: &FMat) -> f64 {
    a.iter()
        .flat_map(|row| row.iter().map(|v| v * v))
        .sum::<f64>()
        .sqrt()
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn fcholesky(s: &FMat) -> Result<FMat, LagrangianError> {
    let n = s.len();
    let mut l = fzeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = s[i][j];
            for m in 0..j {
                sum -= l[i][m] * l[j][m];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(LagrangianError::WitnessConstruction(format!(
                        "Cholesky pivot {sum:e} at position {i} is not positive"
                    )));
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solves x L^t = row for each row of a matrix: Y = X L^(-t) by forward
/// substitution against the lower factor L.
fn fsolve_right_lower_transpose(x: &FMat, l: &FMat) -> FMat {
    let m = l.len();
    let mut y = x.clone();
    for row in &mut y {
        for j in 0..m {
            let mut sum = row[j];
            for p in 0..j {
                sum -= l[j][p] * row[p];
            }
            row[j] = sum / l[j][j];
        }
    }
    y
}

/// Solves the SPD system M z = b via a precomputed Cholesky factor.
fn fcholesky_solve(l: &FMat, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for j in 0..i {
            sum -= l[i][j] * y[j];
        }
        y[i] = sum / l[i][i];
    }
    let mut z = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for j in i + 1..n {
            sum -= l[j][i] * z[j];
        }
        z[i] = sum / l[i][i];
    }
    z
}

struct FLu {
    lu: FMat,
    perm: Vec<usize>,
    sign: f64,
}

fn flu_decompose(a: &FMat) -> Result<FLu, LagrangianError> {
    let n = a.len();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, lu[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty pivot search");
        if pivot_val == 0.0 {
            return Err(LagrangianError::WitnessConstruction(format!(
                "assembled witness matrix is singular at column {col}"
            )));
        }
        if pivot_row != col {
            lu.swap(pivot_row, col);
            perm.swap(pivot_row, col);
            sign = -sign;
        }
        for r in col + 1..n {
            let factor = lu[r][col] / lu[col][col];
            lu[r][col] = factor;
            for c in col + 1..n {
                lu[r][c] -= factor * lu[col][c];
            }
        }
    }
    Ok(FLu { lu, perm, sign })
}

fn flu_det(f: &FLu) -> f64 {
    let mut det = f.sign;
    for i in 0..f.lu.len() {
        det *= f.lu[i][i];
    }
    det
}

/// Solves A X = B column by column through the LU factorization.
fn flu_solve(f: &FLu, b: &FMat) -> FMat {
    let n = f.lu.len();
    let cols = if n == 0 { 0 } else { b[0].len() };
    let mut x = fzeros(n, cols);
    for c in 0..cols {
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[f.perm[i]][c];
            for j in 0..i {
                sum -= f.lu[i][j] * y[j];
            }
            y[i] = sum;
        }
        for i in (0..n).rev() {
            let mut sum = y[i];
            for j in i + 1..n {
                sum -= f.lu[i][j] * y[j];
            }
            y[i] = sum / f.lu[i][i];
        }
        for i in 0..n {
            x[i][c] = y[i];
        }
    }
    x
}

/// Orthonormal column basis by modified Gram-Schmidt with reorthogonalization.
fn fgram_schmidt(a: &FMat) -> Result<FMat, LagrangianError> {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let mut q = a.clone();
    for j in 0..c {
        for _ in 0..2 {
            for i in 0..j {
                let dot: f64 = (0..r).map(|m| q[m][i] * q[m][j]).sum();
                for m in 0..r {
                    q[m][j] -= dot * q[m][i];
                }
            }
        }
        let norm: f64 = (0..r).map(|m| q[m][j] * q[m][j]).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(LagrangianError::WitnessConstruction(format!(
                "representative column {j} collapsed during orthonormalization"
            )));
        }
        for m in 0..r {
            q[m][j] /= norm;
        }
    }
    Ok(q)
}

fn columns_of(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].clone()).collect())
        .collect()
}

fn matrix_from_columns(n: usize, cols: &[Vec<Rational>]) -> RationalMatrix {
    RationalMatrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
}

/// Builds a floating-point g with det g > 0 such that the stacked pair
/// (g on the first n-k columns, g^(-t) on the last l) spans the given
/// theta-nonnegative point up to the tolerance, relative Frobenius.
///
/// The construction mirrors the orbit theorem: split the domain along the
/// exact kernels of the two blocks, Cholesky-normalize the middle Gram
/// block, then complete the missing columns by minimum-norm duality
/// solves. Orientation is fixed by negating the final column when the
/// determinant comes out negative, which re-represents the same point.
pub fn orbit_witness(
    p: &LagrangianPoint,
    tolerance: f64,
) -> Result<OrbitWitness, LagrangianError> {
    if !(tolerance > 0.0) {
        return Err(LagrangianError::WitnessConstruction(format!(
            "tolerance must be positive, got {tolerance:e}"
        )));
    }
    if !p.is_theta_nonnegative() {
        return Err(LagrangianError::NotThetaNonnegative(
            "orbit witnesses exist only over the PSD Gram region".into(),
        ));
    }
    let n = p.n();
    let (k, l) = classify_double(p);
    let a = p.top();
    let c = p.bottom();

    // Exact splitting of the domain: ker C, a greedy standard-vector
    // complement, and ker A. The two kernels intersect trivially because
    // the representative has full rank.
    let ker_c = columns_of(&kernel_basis(&c));
    let ker_a = columns_of(&kernel_basis(&a));
    let mut span = ker_c.clone();
    span.extend(ker_a.iter().cloned());
    let mut current = rank(&matrix_from_columns(n, &span));
    debug_assert_eq!(current, (n - l) + k);
    let mut mid = Vec::new();
    for idx in 0..n {
        if current == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[idx] = Rational::one();
        span.push(e.clone());
        let grown = rank(&matrix_from_columns(n, &span));
        if grown > current {
            current = grown;
            mid.push(e);
        } else {
            span.pop();
        }
    }
    debug_assert_eq!(mid.len(), l - k);
    let x_mid = matrix_from_columns(n, &mid);

    // The Gram pairing restricted to the complement must be PD; this is
    // the exact certificate that the stratum has the expected middle rank.
    let s_mid = &(&x_mid.transpose() * &p.gram()) * &x_mid;
    if !is_positive_definite(&s_mid)? {
        return Err(LagrangianError::WitnessConstruction(
            "middle Gram block is not positive definite".into(),
        ));
    }

    let chol = fcholesky(&s_mid.to_f64_rows())?;
    let mid_tops = fsolve_right_lower_transpose(&(&a * &x_mid).to_f64_rows(), &chol);
    let mid_bottoms = fsolve_right_lower_transpose(&(&c * &x_mid).to_f64_rows(), &chol);
    let top_only = (&a * &matrix_from_columns(n, &ker_c)).to_f64_rows();
    let bottom_only = (&c * &matrix_from_columns(n, &ker_a)).to_f64_rows();

    // Known columns of g^(-t), positions n-l+1..n: the normalized middle
    // bottoms followed by the images of ker A.
    let mut known_inv_t = fzeros(n, l);
    for i in 0..n {
        for j in 0..l - k {
            known_inv_t[i][j] = mid_bottoms[i][j];
        }
        for j in 0..k {
            known_inv_t[i][l - k + j] = bottom_only[i][j];
        }
    }

    // Free columns of g solve the duality constraints with minimum norm.
    let m_mat = ftranspose(&known_inv_t);
    let mmt = fmatmul(&m_mat, &known_inv_t);
    let mmt_chol = fcholesky(&mmt).map_err(|_| {
        LagrangianError::WitnessConstruction(
            "known dual columns are numerically dependent".into(),
        )
    })?;
    let mut g = fzeros(n, n);
    for i in 0..n {
        for j in 0..n - l {
            g[i][j] = top_only[i][j];
        }
        for j in 0..l - k {
            g[i][n - l + j] = mid_tops[i][j];
        }
    }
    for j in 0..k {
        let mut rhs = vec![0.0; l];
        rhs[l - k + j] = 1.0;
        let z = fcholesky_solve(&mmt_chol, &rhs);
        for i in 0..n {
            let mut val = 0.0;
            for (m, zm) in z.iter().enumerate() {
                val += known_inv_t[i][m] * zm;
            }
            g[i][n - k + j] = val;
        }
    }

    let lu = flu_decompose(&g)?;
    if flu_det(&lu) < 0.0 {
        for row in &mut g {
            row[n - 1] = -row[n - 1];
        }
    }
    let mut eye = fzeros(n, n);
    for (i, row) in eye.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let lu_t = flu_decompose(&ftranspose(&g))?;
    debug_assert!(flu_det(&lu_t) > 0.0);
    let g_inv_t = flu_solve(&lu_t, &eye);

    // Assemble the image of the base point and measure how far it is from
    // the column space of the input.
    let mut w = fzeros(2 * n, n);
    for i in 0..n {
        for j in 0..n - k {
            w[i][j] = g[i][j];
        }
        for j in n - l..n {
            w[n + i][j] = g_inv_t[i][j];
        }
    }
    let q = fgram_schmidt(&p.rep().to_f64_rows())?;
    let coeffs = fmatmul(&ftranspose(&q), &w);
    let proj = fmatmul(&q, &coeffs);
    let mut diff = w.clone();
    for i in 0..2 * n {
        for j in 0..n {
            diff[i][j] -= proj[i][j];
        }
    }
    let denom = frobenius(&w);
    let residual = if denom == 0.0 {
        0.0
    } else {
        frobenius(&diff) / denom
    };
    if !(residual <= tolerance) {
        return Err(LagrangianError::WitnessResidual {
            achieved: residual,
            tolerance,
        });
    }
    Ok(OrbitWitness { k, l, g, residual })
}

/// Default relative residual bound for witnesses.
pub const DEFAULT_WITNESS_TOLERANCE: f64 = 1e-9;
