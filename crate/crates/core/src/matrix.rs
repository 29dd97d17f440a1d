//! Dense matrices over prime fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::sparse::{self, SparseRow};

/// A dense row-major matrix with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u32>,
}

/// Outcome of [`Matrix::solve_left`] when the system is consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeftSolution {
    /// Every designated coordinate is determined by the system.
    Unique(Vec<u32>),
    /// A particular solution, plus the designated coordinates that vary
    /// across the solution space.
    NonUnique {
        particular: Vec<u32>,
        ambiguous: Vec<usize>,
    },
}

impl LeftSolution {
    pub fn is_unique(&self) -> bool {
        matches!(self, LeftSolution::Unique(_))
    }

    /// Some solution of the system, unique or not.
    pub fn solution(&self) -> &[u32] {
        match self {
            LeftSolution::Unique(x) => x,
            LeftSolution::NonUnique { particular, .. } => particular,
        }
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors, reducing every entry modulo p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| v % field.modulus()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            field,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The same entries reinterpreted in another prime field.
    pub fn in_field(&self, field: PrimeField) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().map(|&v| v % field.modulus()).collect(),
        }
    }

    /// The matrix made of the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    pub fn with_row_appended(&self, v: &[u32]) -> Result<Matrix> {
        self.check_width(v)?;
        let mut m = self.clone();
        m.data.extend(v.iter().map(|&x| x % self.field.modulus()));
        m.rows += 1;
        Ok(m)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Row vector times matrix, `x · M`.
    pub fn left_mul(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: x.len(),
            });
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            let xr = xr % f.modulus();
            if xr == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(xr, a));
            }
        }
        Ok(out)
    }

    /// Rank over the matrix's field.
    ///
    /// Uses singleton pivoting before falling back to dense elimination; see
    /// [`Matrix::rank_dense`] for the plain elimination.
    pub fn rank(&self) -> usize {
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(self.rows);
        let mut vals: Vec<Vec<u32>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let (c, v): (Vec<u32>, Vec<u32>) = self
                .row(r)
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(c, &v)| (c as u32, v))
                .unzip();
            cols.push(c);
            vals.push(v);
        }
        let rows: Vec<SparseRow<'_>> = cols
            .iter()
            .zip(&vals)
            .map(|(c, v)| SparseRow {
                cols: c,
                vals: Some(v),
            })
            .collect();
        sparse::rank(self.field, self.cols, &rows)
    }

    /// Rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank_dense(&self) -> usize {
        let mut a = self.data.clone();
        sparse::rref(self.field, &mut a, self.rows, self.cols, self.cols).len()
    }

    /// Whether `v` lies in the row space, decided by comparing ranks.
    pub fn in_row_span(&self, v: &[u32]) -> Result<bool> {
        let extended = self.with_row_appended(v)?;
        Ok(extended.rank() == self.rank())
    }

    /// Solves `x · A = y`.
    ///
    /// `designated` lists the coordinates of `x` whose uniqueness matters; if
    /// any of them varies over the solution space the result is
    /// [`LeftSolution::NonUnique`]. Fails with [`SolveError::NoSolution`] when
    /// `y` is outside the row space.
    pub fn solve_left(&self, y: &[u32], designated: &[usize]) -> Result<LeftSolution, SolveError> {
        if y.len() != self.cols {
            return Err(SolveError::Dimension(Error::DimensionMismatch {
                expected: self.cols,
                got: y.len(),
            }));
        }
        if let Some(&bad) = designated.iter().find(|&&i| i >= self.rows) {
            return Err(SolveError::Dimension(Error::IndexOutOfRange {
                row: bad,
                col: 0,
                rows: self.rows,
                cols: 1,
            }));
        }
        let f = self.field;
        // x · A = y  <=>  Aᵀ xᵀ = yᵀ; reduce [Aᵀ | y].
        let (n_eq, n_var) = (self.cols, self.rows);
        let width = n_var + 1;
        let mut aug = vec![0u32; n_eq * width];
        for c in 0..n_eq {
            for r in 0..n_var {
                aug[c * width + r] = self.get(r, c);
            }
            aug[c * width + n_var] = y[c] % f.modulus();
        }
        let pivots = sparse::rref(f, &mut aug, n_eq, width, n_var);
        if (pivots.len()..n_eq).any(|i| aug[i * width + n_var] != 0) {
            return Err(SolveError::NoSolution);
        }
        let mut x = vec![0u32; n_var];
        let mut pivot_row = vec![usize::MAX; n_var];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[i * width + n_var];
            pivot_row[pc] = i;
        }
        let free: Vec<usize> = (0..n_var).filter(|&c| pivot_row[c] == usize::MAX).collect();
        let ambiguous: Vec<usize> = designated
            .iter()
            .copied()
            .filter(|&i| match pivot_row[i] {
                usize::MAX => true,
                row => free.iter().any(|&fc| aug[row * width + fc] != 0),
            })
            .collect();
        if ambiguous.is_empty() {
            Ok(LeftSolution::Unique(x))
        } else {
            Ok(LeftSolution::NonUnique {
                particular: x,
                ambiguous,
            })
        }
    }

    fn check_width(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "  [{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Failure modes of [`Matrix::solve_left`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("right-hand side is not in the row space")]
    NoSolution,
    #[error(transparent)]
    Dimension(Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(Matrix::identity(PrimeField::GF2, 3).rank(), 3);
        assert_eq!(Matrix::zeros(PrimeField::GF2, 4, 2).rank(), 0);
        assert_eq!(Matrix::zeros(PrimeField::GF2, 4, 2).rank_dense(), 0);
    }

    #[test]
    fn span_membership() {
        let id = Matrix::identity(PrimeField::GF2, 26);
        let rest = id.select_rows(&(1..26).collect::<Vec<_>>());
        let mut e0 = vec![0u32; 26];
        e0[0] = 1;
        assert!(!rest.in_row_span(&e0).unwrap());
        assert!(rest.in_row_span(&[0; 26]).unwrap());
        assert!(rest.in_row_span(rest.row(0)).unwrap());
        assert!(rest.in_row_span(&[0; 3]).is_err());
    }

    #[test]
    fn solve_left_identity_returns_rhs() {
        let f = gf(5);
        let id = Matrix::identity(f, 4);
        let y = vec![3, 0, 4, 1];
        assert_eq!(id.solve_left(&y, &[0, 1, 2, 3]).unwrap(), LeftSolution::Unique(y));
    }

    #[test]
    fn solve_left_flags_dependent_rows() {
        let f = gf(3);
        let a = Matrix::from_rows(f, &[vec![1, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        let y = vec![2, 1, 2];
        match a.solve_left(&y, &[0, 1, 2]).unwrap() {
            LeftSolution::NonUnique {
                particular,
                ambiguous,
            } => {
                assert_eq!(ambiguous, vec![0, 1]);
                assert_eq!(a.left_mul(&particular).unwrap(), y);
            }
            other => panic!("expected non-unique, got {other:?}"),
        }
        // The third coordinate alone is still pinned down.
        assert!(a.solve_left(&y, &[2]).unwrap().is_unique());
        assert_eq!(a.solve_left(&[1, 0, 0], &[]), Err(SolveError::NoSolution));
    }
}
