//! Exhaustive total-unimodularity test via the Ghouila–Houri criterion.
//!
//! A matrix is TU iff every subset of its rows can be split into two classes
//! whose difference has all column sums in `{−1, 0, +1}`. Each subset is
//! decided by a backtracking search over row signs that prunes as soon as a
//! column's partial sum can no longer return to `[−1, 1]`.

use crate::error::{Error, Result};
use crate::matrix::TuMatrix;

/// Largest row count accepted by the exhaustive check (2^n subsets).
pub const GHOUILA_HOURI_MAX_ROWS: usize = 20;

pub fn check_tu(matrix: &TuMatrix) -> Result<bool> {
    let n = matrix.row_count();
    if n > GHOUILA_HOURI_MAX_ROWS {
        return Err(Error::SizeLimit(format!(
            "Ghouila-Houri check supports at most {GHOUILA_HOURI_MAX_ROWS} rows, got {n}"
        )));
    }
    let rows = matrix.to_rows();
    let cols = matrix.col_count();
    let mut subset = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        subset.clear();
        subset.extend((0..n).filter(|r| mask & (1 << r) != 0));
        if !has_balanced_signing(&rows, cols, &subset) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether some `±1` signing of `subset` has all column sums in `{−1, 0, +1}`.
pub fn has_balanced_signing(rows: &[Vec<i64>], cols: usize, subset: &[usize]) -> bool {
    // remaining[k][c]: nonzeros of column c among subset[k..]
    let mut remaining = vec![vec![0i64; cols]; subset.len() + 1];
    for k in (0..subset.len()).rev() {
        for c in 0..cols {
            remaining[k][c] = remaining[k + 1][c] + rows[subset[k]][c].abs();
        }
    }
    let mut sums = vec![0i64; cols];
    // The first row's sign is fixed: negating a whole signing preserves validity.
    apply(&mut sums, &rows[subset[0]], 1);
    signing_search(rows, subset, &remaining, 1, &mut sums)
}

fn signing_search(
    rows: &[Vec<i64>],
    subset: &[usize],
    remaining: &[Vec<i64>],
    k: usize,
    sums: &mut [i64],
) -> bool {
    if sums
        .iter()
        .zip(&remaining[k])
        .any(|(s, rem)| s.abs() - rem > 1)
    {
        return false;
    }
    if k == subset.len() {
        return true;
    }
    let row = &rows[subset[k]];
    for sign in [1, -1] {
        apply(sums, row, sign);
        let ok = signing_search(rows, subset, remaining, k + 1, sums);
        apply(sums, row, -sign);
        if ok {
            return true;
        }
    }
    false
}

fn apply(sums: &mut [i64], row: &[i64], sign: i64) {
    for (s, &x) in sums.iter_mut().zip(row) {
        *s += sign * x;
    }
}
