//! Dense exact linear algebra over `Q(zeta_N)`.

use std::fmt;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};

/// A dense row-major matrix of cyclotomic numbers at a fixed conductor.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    conductor: u32,
    rows: Vec<Vec<CycNum>>,
    ncols: usize,
}

impl Matrix {
    pub fn zeros(conductor: u32, nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            conductor,
            rows: vec![vec![CycNum::zero(conductor); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(conductor: u32, n: usize) -> Matrix {
        let mut m = Matrix::zeros(conductor, n, n);
        for k in 0..n {
            m.rows[k][k] = CycNum::one(conductor);
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length and conductor.
    pub fn from_rows(conductor: u32, rows: Vec<Vec<CycNum>>) -> Result<Matrix> {
        let ncols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            if let Some(c) = r.iter().find(|c| c.conductor() != conductor) {
                return Err(Error::ConductorMismatch(conductor, c.conductor()));
            }
        }
        Ok(Matrix { conductor, rows, ncols })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNum {
        &self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNum) {
        self.rows[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[CycNum] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<CycNum>] {
        &self.rows
    }

    pub fn embed(&self, m: u32) -> Result<Matrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            conductor: m,
            rows,
            ncols: self.ncols,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.conductor, self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                t.rows[c][r] = v.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let mut out = Matrix::zeros(self.conductor, self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] = &out.rows[i][j] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for (r, row) in out.rows.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = &*v - &other.rows[r][c];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.rows.iter().enumerate().all(|(r, row)| {
                row.iter()
                    .enumerate()
                    .all(|(c, v)| if r == c { v.is_one() } else { v.is_zero() })
            })
    }

    /// Brings the matrix to reduced row echelon form in place; returns the
    /// pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.ncols {
            if lead == self.rows.len() {
                break;
            }
            let Some(p) = (lead..self.rows.len()).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(lead, p);
            let inv = self.rows[lead][col].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for v in self.rows[lead].iter_mut() {
                    if !v.is_zero() {
                        *v = &*v * &inv;
                    }
                }
            }
            let pivot_row = self.rows[lead].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r == lead || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v = &*v - &(&f * p);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`; vectors in the canonical form read off the RREF.
    pub fn nullspace(&self) -> Vec<Vec<CycNum>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![CycNum::zero(self.conductor); self.ncols];
            v[free] = CycNum::one(self.conductor);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m.rows[r][free];
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.nrows();
        let mut aug = Matrix::zeros(self.conductor, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.rows[r][c] = self.rows[r][c].clone();
            }
            aug.rows[r][n + r] = CycNum::one(self.conductor);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        let rows = aug.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix {
            conductor: self.conductor,
            rows,
            ncols: n,
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycNum::zero(self.conductor), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.rows
                    .iter()
                    .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            )
            .finish()
    }
}

/// Canonical basis (RREF rows) of the span of `vectors`, each of length `dim`.
pub fn span_basis(conductor: u32, dim: usize, vectors: &[Vec<CycNum>]) -> Vec<Vec<CycNum>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix {
        conductor,
        rows: vectors.to_vec(),
        ncols: dim,
    };
    let r = m.rref().len();
    m.rows.truncate(r);
    m.rows
}

pub fn span_dim(conductor: u32, dim: usize, vectors: &[Vec<CycNum>]) -> usize {
    span_basis(conductor, dim, vectors).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            1,
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNum::from_int(1, v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_and_singular() {
        let a = m(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn nullspace_dimension() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.apply(v).iter().all(CycNum::is_zero));
        }
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn span_is_canonical() {
        let v1 = vec![CycNum::from_int(1, 2), CycNum::from_int(1, 4)];
        let v2 = vec![CycNum::from_int(1, -1), CycNum::from_int(1, -2)];
        assert_eq!(span_basis(1, 2, std::slice::from_ref(&v1)), span_basis(1, 2, &[v2, v1]));
    }
}
