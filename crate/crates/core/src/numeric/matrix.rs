use std::ops::{Index, IndexMut};

use super::{NumericError, Rational};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
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

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, NumericError> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if n == 0 || cols == 0 {
            return Err(NumericError::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(NumericError::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, NumericError> {
        if v.len() != self.cols {
            return Err(NumericError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, NumericError> {
        if self.cols != other.rows {
            return Err(NumericError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `a x = b` by Gaussian elimination over the rationals, taking the
/// first nonzero entry of each column as pivot.
pub fn solve_exact(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>, NumericError> {
    let n = a.rows;
    if a.cols != n {
        return Err(NumericError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if b.len() != n {
        return Err(NumericError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut m: Vec<Vec<Rational>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(NumericError::Singular)?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                if m[col][c].is_zero() {
                    continue;
                }
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc = acc - &m[i][j] * &x[j];
            }
        }
        x[i] = acc / &m[i][i];
    }
    Ok(x)
}

/// Strict row diagonal dominance, compared exactly.
pub fn is_diagonally_dominant(a: &RationalMatrix) -> bool {
    if a.rows != a.cols {
        return false;
    }
    (0..a.rows).all(|i| {
        let off = a
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Rational::zero(), |acc, (_, v)| acc + v.abs());
        a[(i, i)].abs() > off
    })
}
