//! Central factorial numbers t(i, j), the coefficient matrix of the p^j S_j
//! relations, and exact forward elimination.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, Rational};
use crate::scalar::Scalar;

/// Dense row-major matrix over an exact scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("rows have different lengths".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
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

    /// Zero-based entry access.
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|v| v.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            let line = cells[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub type RationalMatrix = Matrix<Rational>;

/// t(i, j) = (2 / (2i)!) sum_{m=1}^{i} (-1)^(i-m) C(2i, i+m) m^j.
pub fn central_factorial_t(i: u64, j: u32) -> Rational {
    let mut acc = BigInt::zero();
    for m in 1..=i {
        let term = binomial(2 * i, i + m) * num_traits::pow(BigInt::from(m), j as usize);
        if (i - m) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let fact: BigInt = (1..=2 * i).map(BigInt::from).product();
    Rational::new(acc * 2, fact)
}

/// t(i, j) for 1 <= i <= i_max, 1 <= j <= j_max.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralFactorialTriangle {
    i_max: usize,
    j_max: usize,
    values: Vec<Rational>,
}

impl CentralFactorialTriangle {
    pub fn new(i_max: usize, j_max: usize) -> Self {
        let values = (1..=i_max)
            .flat_map(|i| (1..=j_max).map(move |j| central_factorial_t(i as u64, j as u32)))
            .collect();
        CentralFactorialTriangle { i_max, j_max, values }
    }

    /// One-based t(i, j); `None` outside the stored range.
    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        if i == 0 || j == 0 || i > self.i_max || j > self.j_max {
            return None;
        }
        self.values.get((i - 1) * self.j_max + (j - 1))
    }
}

/// Top-left block of the matrix with one-based entry (m, j) = (m-1)^j - (-m)^j.
pub fn coefficient_matrix(rows: usize, cols: usize) -> Result<RationalMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("matrix dimensions must be >= 1".into()));
    }
    let entry = |m: i64, j: u32| {
        let x = num_traits::pow(BigInt::from(m - 1), j as usize)
            - num_traits::pow(BigInt::from(-m), j as usize);
        Rational::from_integer(x)
    };
    Matrix::from_rows(
        (1..=rows as i64)
            .map(|m| (1..=cols as u32).map(|j| entry(m, j)).collect())
            .collect(),
    )
}

/// Forward elimination to row echelon form: every nonzero row is scaled to a
/// leading 1, entries below each pivot are cleared, entries above are left
/// alone, and zero rows end up at the bottom.
pub fn row_reduce<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let mut rows = m.to_rows();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == rows.len() {
            break;
        }
        let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r][col].try_inv().is_some())
        else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = rows[pivot_row][col].try_inv().expect("pivot is a unit");
        for v in rows[pivot_row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot = rows[pivot_row].clone();
        for row in rows.iter_mut().skip(pivot_row + 1) {
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
        pivot_row += 1;
    }
    Matrix::from_rows(rows).expect("shape preserved")
}

/// The same sum taken over -i <= m <= i and divided by (2i)!; equals t(i, j)
/// for even j and vanishes for odd j.
pub fn central_factorial_full_range(i: u64, j: u32) -> Rational {
    let i = i as i64;
    let mut acc = BigInt::zero();
    for m in -i..=i {
        let term = binomial(2 * i as u64, (i + m) as u64) * num_traits::pow(BigInt::from(m), j as usize);
        if (i - m).rem_euclid(2) == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let fact: BigInt = (1..=2 * i).map(BigInt::from).product();
    Rational::new(acc, fact)
}
