//! `{−1, 0, +1}` constraint matrices whose kernels define regular subspaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::tu::{check_tu, GHOUILA_HOURI_MAX_ROWS};
use crate::rational::{int, Rational};

/// How total unimodularity of a [`TuMatrix`] was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuStatus {
    /// Exhaustive Ghouila–Houri row-subset check passed.
    Verified,
    /// Taken on trust from the caller.
    Asserted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuMatrix {
    cols: usize,
    rows: Vec<Vec<i8>>,
    status: TuStatus,
}

impl TuMatrix {
    /// Builds the matrix and runs the Ghouila–Houri check.
    ///
    /// Fails with [`Error::NotTotallyUnimodular`] when the check rejects it and
    /// with [`Error::SizeLimit`] when it has more than
    /// [`GHOUILA_HOURI_MAX_ROWS`] rows (use [`TuMatrix::asserted`] then).
    pub fn verified(rows: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        let mut m = Self::build(rows, cols, TuStatus::Asserted)?;
        if !check_tu(&m)? {
            return Err(Error::NotTotallyUnimodular);
        }
        m.status = TuStatus::Verified;
        Ok(m)
    }

    /// Builds the matrix without checking total unimodularity.
    pub fn asserted(rows: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        Self::build(rows, cols, TuStatus::Asserted)
    }

    /// Verifies when the row count allows it, otherwise asserts.
    pub fn verified_or_asserted(rows: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        if rows.len() <= GHOUILA_HOURI_MAX_ROWS {
            Self::verified(rows, cols)
        } else {
            Self::asserted(rows, cols)
        }
    }

    fn build(rows: Vec<Vec<i64>>, cols: usize, status: TuStatus) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            let converted = row
                .into_iter()
                .map(|x| match x {
                    -1..=1 => Ok(x as i8),
                    _ => Err(Error::InvalidInput(format!(
                        "matrix entry {x} in row {r} is not in {{-1, 0, 1}}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(converted);
        }
        Ok(TuMatrix { cols, rows: out, status })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn status(&self) -> TuStatus {
        self.status
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r][c] as i64
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = i64> + '_ {
        self.rows[r].iter().map(|&x| x as i64)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.row_count()).map(|r| self.row(r).collect()).collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&x| int(x as i64)).collect())
            .collect()
    }

    /// Columns selected by `cols`, as rational rows (used for support-rank tests).
    pub fn column_submatrix(&self, cols: &[usize]) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| cols.iter().map(|&c| int(row[c] as i64)).collect())
            .collect()
    }

    pub fn mul_int(&self, x: &[i64]) -> Vec<i64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a as i64 * b).sum())
            .collect()
    }

    pub fn mul_rational(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(&a, _)| a != 0)
                    .map(|(&a, b)| if a > 0 { b.clone() } else { -b })
                    .sum()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        crate::linalg::rank(&self.to_rational_rows())
    }
}
