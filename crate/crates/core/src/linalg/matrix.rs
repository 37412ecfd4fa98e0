//! Dense matrices with exact ring arithmetic and a division-free
//! characteristic polynomial.

use std::fmt;

use super::{LinalgError, Polynomial, Scalar};

/// Dense row-major matrix over a scalar ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// All-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Identity matrix of side `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors, which must all have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row,
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds an `rows x cols` matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    /// Overwrites the entry at `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    fn dims(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix product.
    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let mut out: Matrix<T> = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let acc = out.get(i, j).clone() + a.clone() * rhs.get(l, j).clone();
                    out.set(i, j, acc);
                }
            }
        }
        Ok(out)
    }

    /// Scales every entry by `c`.
    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// `e`-th power of a square matrix; the zeroth power is the identity.
    pub fn pow(&self, e: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = Matrix::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `I + M + M^2 + ... + M^k`.
    pub fn geometric_sum(&self, k: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Matrix::identity(self.rows);
        let mut power = Matrix::identity(self.rows);
        for _ in 0..k {
            power = power.mul(self)?;
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        Ok(acc)
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Characteristic polynomial `det(xI - M)` by the Berkowitz method:
    /// division-free, exact in any commutative ring.
    ///
    /// The coefficient vector of each leading principal submatrix is pushed
    /// through a Toeplitz transform built from one new row and column, so
    /// no entry is ever divided.
    pub fn char_poly(&self) -> Result<Polynomial<T>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        // Coefficients of the current principal submatrix, leading first.
        let mut coeffs = vec![T::one()];
        for i in 0..n {
            // Toeplitz column: 1, -M[i][i], -(row . col), -(row . M . col), ...
            let mut t = Vec::with_capacity(i + 2);
            t.push(T::one());
            t.push(-self.get(i, i).clone());
            let row: Vec<&T> = (0..i).map(|j| self.get(i, j)).collect();
            let mut v: Vec<T> = (0..i).map(|j| self.get(j, i).clone()).collect();
            for _ in 2..=(i + 1) {
                let mut dot = T::zero();
                for (a, b) in row.iter().zip(&v) {
                    dot = dot + (*a).clone() * b.clone();
                }
                t.push(-dot);
                let mut next = Vec::with_capacity(i);
                for r in 0..i {
                    let mut acc = T::zero();
                    for (c, item) in v.iter().enumerate() {
                        acc = acc + self.get(r, c).clone() * item.clone();
                    }
                    next.push(acc);
                }
                v = next;
            }
            let mut next = vec![T::zero(); i + 2];
            for (s, slot) in next.iter_mut().enumerate() {
                for (q, tq) in t.iter().enumerate().take(s + 1) {
                    if let Some(c) = coeffs.get(s - q) {
                        *slot = slot.clone() + tq.clone() * c.clone();
                    }
                }
            }
            coeffs = next;
        }
        coeffs.reverse();
        Ok(Polynomial::new(coeffs))
    }

    /// Companion matrix of a monic polynomial of degree at least one.
    pub fn companion(p: &Polynomial<T>) -> Result<Self, LinalgError> {
        let n = match p.degree() {
            Some(n) if n >= 1 => n,
            Some(_) => return Err(LinalgError::NotSquare { rows: 0, cols: 0 }),
            None => return Err(LinalgError::NotMonicNormalizable),
        };
        if !p.is_monic() {
            return Err(LinalgError::NotMonic);
        }
        let mut m = Matrix::zero(n, n);
        for i in 0..n - 1 {
            m.set(i + 1, i, T::one());
        }
        for i in 0..n {
            m.set(i, n - 1, -p.coeff(i));
        }
        Ok(m)
    }

    /// Block-diagonal matrix assembled from square blocks.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zero(n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(offset + i, offset + j, b.get(i, j).clone());
                }
            }
            offset += b.rows;
        }
        m
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
