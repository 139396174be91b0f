//! Small exact integer matrices.
//!
//! Elements of a Coxeter group are stored as integer matrices acting on the
//! root lattice in simple-root coordinates. All arithmetic is checked; an
//! overflow is reported as an error instead of wrapping, since matrix entries
//! double as canonical hash keys.

use crate::error::{Error, Result};

/// A square integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl SquareMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SquareMatrix { n, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidCartanMatrix(format!(
                    "matrix is not square: {} rows but a row of length {}",
                    n,
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, entries })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.n + c] = v;
    }

    /// Row-major entry sequence; this is the canonical key of the matrix.
    #[inline]
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn is_identity(&self) -> bool {
        self == &SquareMatrix::identity(self.n)
    }

    /// True if every entry of column `c` is <= 0.
    pub fn column_nonpositive(&self, c: usize) -> bool {
        (0..self.n).all(|r| self.get(r, c) <= 0)
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let term = a
                        .checked_mul(other.get(k, c))
                        .ok_or(Error::Overflow("matrix multiplication"))?;
                    out[r * n + c] = out[r * n + c]
                        .checked_add(term)
                        .ok_or(Error::Overflow("matrix multiplication"))?;
                }
            }
        }
        Ok(SquareMatrix { n, entries: out })
    }

    /// Multiply in place on the right by the simple reflection with Cartan
    /// row `cartan_row` at generator index `i`:
    /// `M <- M * S_i`, with `(M S_i)[r][c] = M[r][c] - M[r][i] * A[i][c]`.
    pub fn mul_reflection_right(&mut self, i: usize, cartan_row: &[i64]) -> Result<()> {
        let n = self.n;
        for r in 0..n {
            let pivot = self.get(r, i);
            if pivot == 0 {
                continue;
            }
            for c in 0..n {
                let term = pivot
                    .checked_mul(cartan_row[c])
                    .ok_or(Error::Overflow("reflection product"))?;
                let v = self
                    .get(r, c)
                    .checked_sub(term)
                    .ok_or(Error::Overflow("reflection product"))?;
                self.set(r, c, v);
            }
        }
        Ok(())
    }

    /// Multiply in place on the left by the simple reflection at index `i`:
    /// `M <- S_i * M`, with `(S_i M)[i][c] = M[i][c] - sum_k A[i][k] M[k][c]`.
    pub fn mul_reflection_left(&mut self, i: usize, cartan_row: &[i64]) -> Result<()> {
        let n = self.n;
        for c in 0..n {
            let mut acc: i64 = 0;
            for k in 0..n {
                let a = cartan_row[k];
                if a == 0 {
                    continue;
                }
                let term = a
                    .checked_mul(self.get(k, c))
                    .ok_or(Error::Overflow("reflection product"))?;
                acc = acc
                    .checked_add(term)
                    .ok_or(Error::Overflow("reflection product"))?;
            }
            let v = self
                .get(i, c)
                .checked_sub(acc)
                .ok_or(Error::Overflow("reflection product"))?;
            self.set(i, c, v);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_access() {
        let m = SquareMatrix::identity(3);
        assert!(m.is_identity());
        assert_eq!(m.get(1, 1), 1);
        assert_eq!(m.get(0, 2), 0);
    }

    #[test]
    fn reflection_updates_match_full_product() {
        // A2 Cartan matrix.
        let a = SquareMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let s0 = {
            let mut m = SquareMatrix::identity(2);
            m.mul_reflection_right(0, a.row(0)).unwrap();
            m
        };
        // s0 acts by alpha_1 -> -alpha_1, alpha_2 -> alpha_2 + alpha_1.
        assert_eq!(s0.entries(), &[-1, 1, 0, 1]);

        let mut left = s0.clone();
        left.mul_reflection_left(1, a.row(1)).unwrap();
        let s1 = {
            let mut m = SquareMatrix::identity(2);
            m.mul_reflection_right(1, a.row(1)).unwrap();
            m
        };
        assert_eq!(left, s1.mul(&s0).unwrap());
    }

    #[test]
    fn non_square_rejected() {
        assert!(SquareMatrix::from_rows(&[vec![2, -1], vec![-1]]).is_err());
    }
}
