//! Dense matrices over [`Rational`].
//!
//! Row-major storage, exact arithmetic throughout. Entry access is 0-based;
//! the combinatorial index sets used elsewhere in the crate (coset indices,
//! admissible row sets) are 1-based and converted at the boundary.
//!
//! Serialized form: `{"rows": r, "cols": c, "data": [[..row 0..], ...]}`
//! with entries as rational strings.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LinalgError;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::ShapeMismatch("ragged row lengths".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builder over integer literals, for tests and fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let converted = rows
            .iter()
            .map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        Self::from_rows(converted).expect("literal rows are rectangular")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    /// Submatrix selection; indices are 0-based and must be in bounds.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.at(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn hstack(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                right.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols, "vstack column mismatch");
        Self::from_fn(self.rows + below.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                below.at(i - self.rows, j).clone()
            }
        })
    }

    /// Rows `lo..hi` (0-based, half-open), all columns.
    pub fn row_slice(&self, lo: usize, hi: usize) -> Self {
        let idx: Vec<usize> = (lo..hi).collect();
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&idx, &all)
    }

    /// Frobenius norm squared, exact.
    pub fn frobenius_sq(&self) -> Rational {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_f64()).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        self.at(r, c)
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += &prod;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Rational::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RationalMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let data: Vec<&[Rational]> = (0..self.rows).map(|i| self.row(i)).collect();
        st.serialize_field("data", &data)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.data.len() != repr.rows || repr.data.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix data does not match declared shape"));
        }
        Ok(RationalMatrix {
            rows: repr.rows,
            cols: repr.cols,
            data: repr.data.into_iter().flatten().collect(),
        })
    }
}

/// The four n x n blocks of a 2n x 2n matrix, in reading order A, B, C, D.
pub fn blocks(m: &RationalMatrix) -> (RationalMatrix, RationalMatrix, RationalMatrix, RationalMatrix) {
    assert!(m.is_square() && m.rows() % 2 == 0, "blocks need an even square matrix");
    let n = m.rows() / 2;
    let lo: Vec<usize> = (0..n).collect();
    let hi: Vec<usize> = (n..2 * n).collect();
    (
        m.submatrix(&lo, &lo),
        m.submatrix(&lo, &hi),
        m.submatrix(&hi, &lo),
        m.submatrix(&hi, &hi),
    )
}

/// Assembles `[[a, b], [c, d]]` from four n x n blocks.
pub fn from_blocks(
    a: &RationalMatrix,
    b: &RationalMatrix,
    c: &RationalMatrix,
    d: &RationalMatrix,
) -> RationalMatrix {
    let n = a.rows();
    assert!(
        [a, b, c, d].iter().all(|m| m.rows() == n && m.cols() == n),
        "blocks must be square of equal size"
    );
    RationalMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a.at(i, j).clone(),
        (true, false) => b.at(i, j - n).clone(),
        (false, true) => c.at(i - n, j).clone(),
        (false, false) => d.at(i - n, j - n).clone(),
    })
}
