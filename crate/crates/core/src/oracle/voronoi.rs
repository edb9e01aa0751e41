//! Strict Voronoi vectors by enumeration, Voronoi's coset criterion, and the
//! cube-projection description of the Voronoi cell.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OracleLimits;
use crate::error::{Error, Result};
use crate::lattice::{PrimitiveChain, ZonotopalLattice};
use crate::rational::{int, ratio, to_rational_vec, IntVector, Rational};

/// Facet description `{x : (x, v)_g ≤ (v, v)_g / 2 for every relevant v}`.
#[derive(Debug, Clone)]
pub struct VoronoiCellDescription {
    pub relevant_vectors: Vec<PrimitiveChain>,
}

impl VoronoiCellDescription {
    pub fn new(lattice: &ZonotopalLattice, limits: &OracleLimits) -> Result<Self> {
        Ok(VoronoiCellDescription { relevant_vectors: enumerate_primitive_chains(lattice, limits)? })
    }

    /// First relevant vector whose facet inequality `x` violates.
    pub fn violated_facet(&self, lattice: &ZonotopalLattice, x: &[Rational]) -> Option<&PrimitiveChain> {
        let g = lattice.weights();
        self.relevant_vectors.iter().find(|v| {
            let mut dot = Rational::zero();
            let mut norm = Rational::zero();
            for (i, &c) in v.coords().iter().enumerate() {
                if c != 0 {
                    let term = &g[i] * &x[i];
                    if c > 0 {
                        dot += term;
                    } else {
                        dot -= term;
                    }
                    norm += &g[i];
                }
            }
            dot * int(2) > norm
        })
    }

    pub fn contains(&self, lattice: &ZonotopalLattice, x: &[Rational]) -> bool {
        self.violated_facet(lattice, x).is_none()
    }
}

/// All `x ∈ {−1, 0, 1}^m ∩ ker M`, `x ≠ 0`, of inclusion-minimal support,
/// sorted lexicographically.
///
/// Minimality is decided by rank (`rank M_S = |S| − 1`), not by comparing
/// against the other `±1` kernel vectors, so the scan does not presuppose
/// regularity.
pub fn enumerate_primitive_chains(lattice: &ZonotopalLattice, limits: &OracleLimits) -> Result<Vec<PrimitiveChain>> {
    let m = lattice.dim();
    if m > limits.max_coords {
        return Err(Error::SizeLimit(format!(
            "primitive chain scan needs m <= {}, got {m}",
            limits.max_coords
        )));
    }
    let rows = lattice.matrix().to_rows();
    // slack[r][i] = Σ_{k ≥ i} |M_rk|
    let mut slack = vec![vec![0i64; m + 1]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for i in (0..m).rev() {
            slack[r][i] = slack[r][i + 1] + row[i].abs();
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; m];
    let mut partial = vec![0i64; rows.len()];
    scan_signs(&rows, &slack, 0, &mut x, &mut partial, &mut |x| {
        if x.iter().any(|&c| c != 0) && lattice.has_minimal_support(x) {
            out.push(PrimitiveChain::from_signs_unchecked(x.to_vec()));
        }
    });
    out.sort();
    Ok(out)
}

fn scan_signs(
    rows: &[Vec<i64>],
    slack: &[Vec<i64>],
    i: usize,
    x: &mut [i64],
    partial: &mut [i64],
    emit: &mut dyn FnMut(&[i64]),
) {
    if partial.iter().zip(slack).any(|(p, s)| p.abs() > s[i]) {
        return;
    }
    if i == x.len() {
        emit(x);
        return;
    }
    for val in [-1i64, 0, 1] {
        x[i] = val;
        for (p, row) in partial.iter_mut().zip(rows) {
            *p += val * row[i];
        }
        scan_signs(rows, slack, i + 1, x, partial, emit);
        for (p, row) in partial.iter_mut().zip(rows) {
            *p -= val * row[i];
        }
    }
    x[i] = 0;
}

pub fn voronoi_relevant_count(lattice: &ZonotopalLattice, limits: &OracleLimits) -> Result<usize> {
    Ok(enumerate_primitive_chains(lattice, limits)?.len())
}

/// Voronoi's criterion: nonzero `v ∈ L` is a strict Voronoi vector iff `±v`
/// are the only shortest vectors of the coset `v + 2L`.
///
/// The coset is scanned coordinatewise rather than over a coefficient box:
/// any competitor `u` with `(u, u)_g ≤ (v, v)_g` satisfies
/// `g_i u_i² ≤ (v, v)_g` for every `i`, so `|u_i| ≤ ⌊√((v, v)_g / g_i)⌋`,
/// and `u ∈ v + 2L` iff `u ≡ v (mod 2)` coordinatewise and `M u = 0`. The
/// enumeration box is therefore complete by construction.
pub fn is_strict_voronoi_by_coset(v: &[i64], lattice: &ZonotopalLattice, limits: &OracleLimits) -> Result<bool> {
    if v.len() != lattice.dim() {
        return Err(Error::Dimension(format!("vector of length {} for m = {}", v.len(), lattice.dim())));
    }
    if v.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    if !lattice.contains(v) {
        return Err(Error::NotInLattice(format!("{v:?}")));
    }
    if lattice.dim() > limits.max_coords {
        return Err(Error::SizeLimit(format!("coset scan needs m <= {}", limits.max_coords)));
    }
    let g = lattice.weights();
    let budget = lattice.norm_sq_int(v);
    let bounds: Vec<i64> = g
        .iter()
        .map(|gi| {
            let mut k = 0i64;
            while gi * int((k + 1) * (k + 1)) <= budget {
                k += 1;
            }
            k
        })
        .collect();
    let rows = lattice.matrix().to_rows();
    let m = v.len();
    let mut slack = vec![vec![0i64; m + 1]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for i in (0..m).rev() {
            slack[r][i] = slack[r][i + 1] + row[i].abs() * bounds[i];
        }
    }
    let neg: IntVector = v.iter().map(|x| -x).collect();
    let mut search = CosetSearch {
        g,
        rows: &rows,
        slack: &slack,
        bounds: &bounds,
        parity: v.iter().map(|x| x.rem_euclid(2)).collect(),
        budget: &budget,
        v,
        neg: &neg,
        u: vec![0; m],
        partial: vec![0; rows.len()],
    };
    Ok(!search.find_competitor(0, Rational::zero()))
}

struct CosetSearch<'a> {
    g: &'a [Rational],
    rows: &'a [Vec<i64>],
    slack: &'a [Vec<i64>],
    bounds: &'a [i64],
    parity: Vec<i64>,
    budget: &'a Rational,
    v: &'a [i64],
    neg: &'a [i64],
    u: IntVector,
    partial: Vec<i64>,
}

impl CosetSearch<'_> {
    fn find_competitor(&mut self, i: usize, norm: Rational) -> bool {
        if norm > *self.budget {
            return false;
        }
        if self.partial.iter().zip(self.slack).any(|(p, s)| p.abs() > s[i]) {
            return false;
        }
        if i == self.u.len() {
            return self.u != self.v && self.u != self.neg;
        }
        let b = self.bounds[i];
        let mut val = -b;
        if (val - self.parity[i]).rem_euclid(2) != 0 {
            val += 1;
        }
        while val <= b {
            self.u[i] = val;
            for (p, row) in self.partial.iter_mut().zip(self.rows) {
                *p += val * row[i];
            }
            let next = &norm + &self.g[i] * int(val * val);
            let found = self.find_competitor(i + 1, next);
            for (p, row) in self.partial.iter_mut().zip(self.rows) {
                *p -= val * row[i];
            }
            if found {
                return true;
            }
            val += 2;
        }
        self.u[i] = 0;
        false
    }
}

/// Dyadic sample in `[−half_width, half_width]^m` with 16 bits of resolution.
fn dyadic_sample(rng: &mut ChaCha8Rng, m: usize, half_width: &Rational) -> Vec<Rational> {
    const STEPS: i64 = 1 << 15;
    (0..m)
        .map(|_| half_width * ratio(rng.gen_range(-STEPS..=STEPS), STEPS))
        .collect()
}

/// Projects `samples` seeded dyadic points of the cube `[−h, h]^m` onto
/// `span L` and counts how many land outside the Voronoi cell.
pub fn count_projection_violations(
    lattice: &ZonotopalLattice,
    samples: usize,
    seed: u64,
    half_width: &Rational,
    limits: &OracleLimits,
) -> Result<usize> {
    let cell = VoronoiCellDescription::new(lattice, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let x = dyadic_sample(&mut rng, lattice.dim(), half_width);
        let y = lattice.project(&x)?;
        if !cell.contains(lattice, &y) {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Checks that `π_g([−1/2, 1/2]^m)` lands inside the Voronoi cell on
/// `samples` seeded points (plus the cube's centre).
pub fn check_projection_theorem(
    lattice: &ZonotopalLattice,
    samples: usize,
    seed: u64,
    limits: &OracleLimits,
) -> Result<bool> {
    let cell = VoronoiCellDescription::new(lattice, limits)?;
    let centre = lattice.project(&to_rational_vec(&vec![0; lattice.dim()]))?;
    if !cell.contains(lattice, &centre) {
        return Ok(false);
    }
    Ok(count_projection_violations(lattice, samples, seed, &ratio(1, 2), limits)? == 0)
}
