//! Dense exact Gaussian elimination over the rationals.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in order.
pub fn row_reduce(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == height {
            break;
        }
        let Some(p) = (r..height).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..height {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, p) in other.iter_mut().zip(pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut copy = rows.to_vec();
    row_reduce(&mut copy).len()
}

/// Solves the square system `a x = b`, or `None` when `a` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { crate::rational::int(1) } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Sylvester-style test via symmetric elimination: every pivot must be positive.
pub fn is_positive_definite(a: &[Vec<Rational>]) -> bool {
    let n = a.len();
    let mut m = a.to_vec();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let delta = &f * &m[k][j];
                m[i][j] -= delta;
            }
        }
    }
    true
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_of_incidence_triangle() {
        let m = mat(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn solve_and_inverse_agree() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(x, vec![ratio(1, 5), ratio(3, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_vec(&inv, &[int(1), int(2)]), x);
        assert!(solve(&mat(&[&[1, 1], &[2, 2]]), &[int(0), int(0)]).is_none());
    }

    #[test]
    fn positive_definiteness() {
        assert!(is_positive_definite(&mat(&[&[2, -1], &[-1, 2]])));
        assert!(!is_positive_definite(&mat(&[&[1, -1], &[-1, 1]])));
        assert!(!is_positive_definite(&mat(&[&[1, 2], &[2, 1]])));
    }
}
