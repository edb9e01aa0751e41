//! Enumeration CVP and the Voronoi-cell optimality certificate.

use num_bigint::BigInt;

use super::voronoi::VoronoiCellDescription;
use super::OracleLimits;
use crate::error::{Error, Result};
use crate::linalg;
use crate::mmcc::CvpInstance;
use crate::rational::{denominator_lcm, round_to_i64, to_rational_vec, IntVector, Rational};

/// `u` is a closest vector iff `t − u` lies in the Voronoi cell, i.e.
/// `|(t − u, x)_g| ≤ (x, x)_g / 2` for every strict Voronoi vector `x`.
pub fn certify_closest(u: &[i64], instance: &CvpInstance, limits: &OracleLimits) -> Result<bool> {
    let lattice = instance.lattice();
    if !lattice.contains(u) {
        return Ok(false);
    }
    let cell = VoronoiCellDescription::new(lattice, limits)?;
    let residual: Vec<Rational> = instance
        .target()
        .iter()
        .zip(u)
        .map(|(t, &x)| t - Rational::from_integer(x.into()))
        .collect();
    Ok(cell.contains(lattice, &residual))
}

/// Exhaustive search over the coefficient box `|α_k − round(α*_k)| ≤ radius`
/// around the real least-squares coefficients `α*` of the target. The best
/// point (ties: lexicographically smallest) must pass [`certify_closest`];
/// otherwise the radius doubles up to `limits.max_radius`.
pub fn brute_force_cvp(instance: &CvpInstance, radius: i64, limits: &OracleLimits) -> Result<IntVector> {
    let lattice = instance.lattice();
    let m = lattice.dim();
    let basis = lattice.basis();
    let r = basis.len();
    if r == 0 {
        return Ok(vec![0; m]);
    }
    if r > limits.max_rank {
        return Err(Error::SizeLimit(format!("enumeration CVP needs rank <= {}, got {r}", limits.max_rank)));
    }
    let t = instance.target();
    let g = lattice.weights();
    let b: Vec<Vec<Rational>> = basis.iter().map(|v| to_rational_vec(v)).collect();
    let gram: Vec<Vec<Rational>> = (0..r)
        .map(|i| (0..r).map(|j| lattice.inner(&b[i], &b[j]).unwrap()).collect())
        .collect();
    let rhs: Vec<Rational> = b.iter().map(|bi| lattice.inner(bi, t).unwrap()).collect();
    let alpha = linalg::solve(&gram, &rhs)
        .ok_or_else(|| Error::Oracle("kernel basis Gram matrix is singular".into()))?;
    let centre: Vec<i64> = alpha.iter().map(round_to_i64).collect::<Result<_>>()?;

    // score(x) = Σ ĝ_i (D x_i − t̂_i)² with ĝ = G g, t̂ = D t integral
    let dt = denominator_lcm(t);
    let dg = denominator_lcm(g);
    let g_int: Vec<BigInt> = g.iter().map(|w| (w * Rational::from_integer(dg.clone())).to_integer()).collect();
    let t_int: Vec<BigInt> = t.iter().map(|x| (x * Rational::from_integer(dt.clone())).to_integer()).collect();
    let score = |x: &[i64]| -> BigInt {
        x.iter()
            .zip(&g_int)
            .zip(&t_int)
            .map(|((&xi, gi), ti)| {
                let d = &dt * BigInt::from(xi) - ti;
                gi * &d * &d
            })
            .sum()
    };

    let mut radius = radius.max(1);
    loop {
        let mut best: Option<(BigInt, IntVector)> = None;
        let mut coeff: Vec<i64> = centre.iter().map(|c| c - radius).collect();
        let mut x = vec![0i64; m];
        loop {
            x.iter_mut().for_each(|v| *v = 0);
            for (a, bv) in coeff.iter().zip(basis) {
                if *a != 0 {
                    for (xi, bi) in x.iter_mut().zip(bv) {
                        *xi += a * bi;
                    }
                }
            }
            let s = score(&x);
            let better = match &best {
                None => true,
                Some((bs, bx)) => s < *bs || (s == *bs && x < *bx),
            };
            if better {
                best = Some((s, x.clone()));
            }
            // odometer over the box
            let mut k = 0;
            while k < r {
                coeff[k] += 1;
                if coeff[k] <= centre[k] + radius {
                    break;
                }
                coeff[k] = centre[k] - radius;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        let (_, candidate) = best.expect("box is nonempty");
        if certify_closest(&candidate, instance, limits)? {
            return Ok(candidate);
        }
        radius *= 2;
        if radius > limits.max_radius {
            return Err(Error::Oracle(format!(
                "no certified closest vector within coefficient radius {}",
                limits.max_radius
            )));
        }
    }
}

/// Squared distance from the target to the lattice, by enumeration.
pub fn closest_distance_sq(instance: &CvpInstance, limits: &OracleLimits) -> Result<Rational> {
    let x = brute_force_cvp(instance, 1, limits)?;
    Ok(instance.lattice().distance_sq(&x, instance.target()))
}
