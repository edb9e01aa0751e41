//! Zonotopal lattices `L = ker M ∩ ℤ^m` with the weighted inner product
//! `(x, y)_g = Σ g_i x_i y_i`, and the chain types living in them.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::TuMatrix;
use crate::rational::{big_to_i64, int, to_rational_vec, IntVector, Rational};
use crate::simplex::{solve_lp, LpProblem};

/// `Σ g_i x_i y_i`.
pub fn inner_product(x: &[Rational], y: &[Rational], g: &[Rational]) -> Result<Rational> {
    if x.len() != y.len() || x.len() != g.len() {
        return Err(Error::Dimension(format!(
            "inner product of lengths {}, {} with {} weights",
            x.len(),
            y.len(),
            g.len()
        )));
    }
    Ok(x.iter()
        .zip(y)
        .zip(g)
        .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
        .map(|((a, b), w)| a * b * w)
        .sum())
}

/// Indices of the nonzero coordinates, ascending.
pub fn support<T: Zero>(x: &[T]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Integral basis of `ker M ∩ ℤ^m`.
///
/// Column-style integer elimination: `M` is driven to lower echelon form by
/// unimodular column operations accumulated in `U`, so `M U = [H | 0]`; the
/// columns of `U` past the rank are a lattice basis of the integer kernel.
/// For TU input every pivot is `±1` and this is ordinary pivoting.
pub fn kernel_basis(matrix: &TuMatrix) -> Vec<IntVector> {
    let m = matrix.col_count();
    let n = matrix.row_count();
    let mut a: Vec<Vec<BigInt>> = matrix
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    // u[c] is column c of U
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|c| (0..m).map(|i| if i == c { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut k = 0;
    for r in 0..n {
        if k == m {
            break;
        }
        loop {
            let pivot = (k..m)
                .filter(|&c| !a[r][c].is_zero())
                .min_by(|&x, &y| a[r][x].abs().cmp(&a[r][y].abs()).then(x.cmp(&y)));
            let Some(p) = pivot else { break };
            swap_columns(&mut a, &mut u, k, p);
            let mut done = true;
            for c in k + 1..m {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][k]);
                subtract_column(&mut a, &mut u, c, k, &q);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                k += 1;
                break;
            }
        }
    }
    u[k..]
        .iter()
        .map(|col| col.iter().map(|x| big_to_i64(x).expect("kernel basis entry overflow")).collect())
        .collect()
}

fn swap_columns(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// column `dst -= q * column src`
fn subtract_column(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let delta = &row[src] * q;
        row[dst] -= delta;
    }
    let src_col = u[src].clone();
    for (x, s) in u[dst].iter_mut().zip(&src_col) {
        *x -= s * q;
    }
}

/// The `g`-orthogonal projection onto `span L`, precomputed as a matrix.
#[derive(Debug, Clone)]
pub struct SpanProjector {
    matrix: Vec<Vec<Rational>>,
}

impl SpanProjector {
    /// `P = B (Bᵀ G B)⁻¹ Bᵀ G` with `G = diag(g)`.
    fn new(basis: &[IntVector], g: &[Rational]) -> Self {
        let m = g.len();
        let r = basis.len();
        if r == 0 {
            return SpanProjector { matrix: vec![vec![Rational::zero(); m]; m] };
        }
        let b: Vec<Vec<Rational>> = basis.iter().map(|v| to_rational_vec(v)).collect();
        let gram: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|j| inner_product(&b[i], &b[j], g).unwrap()).collect())
            .collect();
        let gram_inv = linalg::inverse(&gram).expect("kernel basis is linearly independent");
        // coefficient map C = (BᵀGB)⁻¹ BᵀG, r × m
        let coeff: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..m)
                    .map(|c| {
                        let s: Rational = (0..r).map(|j| &gram_inv[i][j] * &b[j][c]).sum();
                        s * &g[c]
                    })
                    .collect()
            })
            .collect();
        let matrix = (0..m)
            .map(|row| {
                (0..m)
                    .map(|col| (0..r).map(|i| &b[i][row] * &coeff[i][col]).sum())
                    .collect()
            })
            .collect();
        SpanProjector { matrix }
    }

    pub fn apply(&self, t: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.matrix, t)
    }
}

/// A regular lattice `ker M ∩ ℤ^m` with positive weights `g`.
#[derive(Clone)]
pub struct ZonotopalLattice {
    matrix: TuMatrix,
    weights: Vec<Rational>,
    basis: Vec<IntVector>,
    projector: OnceLock<SpanProjector>,
}

impl fmt::Debug for ZonotopalLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZonotopalLattice")
            .field("matrix", &self.matrix)
            .field("weights", &self.weights)
            .field("rank", &self.basis.len())
            .finish()
    }
}

impl PartialEq for ZonotopalLattice {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.weights == other.weights
    }
}

impl ZonotopalLattice {
    pub fn new(matrix: TuMatrix, weights: Vec<Rational>) -> Result<Self> {
        let m = matrix.col_count();
        if m == 0 {
            return Err(Error::InvalidInput("lattice needs at least one coordinate".into()));
        }
        if weights.len() != m {
            return Err(Error::Dimension(format!("{} weights for {m} coordinates", weights.len())));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidInput(format!("weight {i} is not positive")));
        }
        let basis = kernel_basis(&matrix);
        Ok(ZonotopalLattice { matrix, weights, basis, projector: OnceLock::new() })
    }

    /// Unit weights.
    pub fn unweighted(matrix: TuMatrix) -> Result<Self> {
        let m = matrix.col_count();
        Self::new(matrix, vec![int(1); m])
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self> {
        Self::new(self.matrix.clone(), weights)
    }

    pub fn matrix(&self) -> &TuMatrix {
        &self.matrix
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Ambient dimension `m`.
    pub fn dim(&self) -> usize {
        self.matrix.col_count()
    }

    /// Lattice rank `m − rank M`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && self.matrix.mul_int(x).iter().all(|&s| s == 0)
    }

    pub fn in_span(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && self.matrix.mul_rational(x).iter().all(Zero::is_zero)
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        inner_product(x, y, &self.weights)
    }

    pub fn norm_sq_int(&self, x: &[i64]) -> Rational {
        x.iter()
            .zip(&self.weights)
            .filter(|(&a, _)| a != 0)
            .map(|(&a, w)| w * int(a * a))
            .sum()
    }

    /// `(x − t, x − t)_g` for integer `x`.
    pub fn distance_sq(&self, x: &[i64], t: &[Rational]) -> Rational {
        x.iter()
            .zip(t)
            .zip(&self.weights)
            .map(|((&a, b), w)| {
                let d = int(a) - b;
                &d * &d * w
            })
            .sum()
    }

    pub fn projector(&self) -> &SpanProjector {
        self.projector.get_or_init(|| SpanProjector::new(&self.basis, &self.weights))
    }

    /// The `g`-orthogonal projection of `t` onto `span L`.
    pub fn project(&self, t: &[Rational]) -> Result<Vec<Rational>> {
        if t.len() != self.dim() {
            return Err(Error::Dimension(format!("target of length {} for m = {}", t.len(), self.dim())));
        }
        Ok(self.projector().apply(t))
    }

    /// Whether the nonzero vector `x ∈ ker M` has inclusion-minimal support:
    /// the columns on its support have a one-dimensional kernel.
    pub fn has_minimal_support(&self, x: &[i64]) -> bool {
        let s = support(x);
        !s.is_empty() && linalg::rank(&self.matrix.column_submatrix(&s)) + 1 == s.len()
    }
}

pub fn project_onto_span(t: &[Rational], lattice: &ZonotopalLattice) -> Result<Vec<Rational>> {
    lattice.project(t)
}

/// A lattice vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    coords: IntVector,
}

impl Chain {
    pub fn new(coords: IntVector, lattice: &ZonotopalLattice) -> Result<Self> {
        if !lattice.contains(&coords) {
            return Err(Error::NotInLattice(format!("{coords:?}")));
        }
        Ok(Chain { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> IntVector {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

/// A `{−1, 0, +1}` lattice vector of inclusion-minimal support, equivalently
/// a strict Voronoi vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveChain {
    coords: IntVector,
    positive: Vec<usize>,
    negative: Vec<usize>,
}

impl PrimitiveChain {
    pub fn new(coords: IntVector, lattice: &ZonotopalLattice) -> Result<Self> {
        if coords.iter().any(|x| !(-1..=1).contains(x)) {
            return Err(Error::InvalidInput(format!("{coords:?} has entries outside {{-1, 0, 1}}")));
        }
        if !lattice.contains(&coords) {
            return Err(Error::NotInLattice(format!("{coords:?}")));
        }
        if !lattice.has_minimal_support(&coords) {
            return Err(Error::InvalidInput(format!("{coords:?} does not have minimal support")));
        }
        Ok(Self::from_signs_unchecked(coords))
    }

    pub(crate) fn from_signs_unchecked(coords: IntVector) -> Self {
        let positive = (0..coords.len()).filter(|&i| coords[i] == 1).collect();
        let negative = (0..coords.len()).filter(|&i| coords[i] == -1).collect();
        PrimitiveChain { coords, positive, negative }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `u⁺ = {i : u_i = +1}`
    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    /// `u⁻ = {i : u_i = −1}`
    pub fn negative(&self) -> &[usize] {
        &self.negative
    }

    pub fn support_len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn negated(&self) -> Self {
        PrimitiveChain {
            coords: self.coords.iter().map(|x| -x).collect(),
            positive: self.negative.clone(),
            negative: self.positive.clone(),
        }
    }
}

/// Writes `v` as a sum of sign-compatible primitive chains.
///
/// Each round solves the feasibility LP `{y ≥ 0, Σ_i M_i σ_i y_i = 0,
/// Σ y_i = 1}` over the current support with `σ = sign(v)`. A basic solution
/// is a normalized extreme ray of the conformal cone, i.e. an elementary
/// chain; regularity makes it a `{0, ±1}` vector after rescaling. It is
/// subtracted and the loop continues, which takes at most `Σ|v_i|` rounds.
pub fn conformal_decompose(v: &Chain, lattice: &ZonotopalLattice) -> Result<Vec<PrimitiveChain>> {
    if !lattice.contains(v.coords()) {
        return Err(Error::NotInLattice(format!("{:?}", v.coords())));
    }
    let matrix = lattice.matrix();
    let mut rest = v.coords().to_vec();
    let bound: i64 = rest.iter().map(|x| x.abs()).sum();
    let mut parts = Vec::new();
    while rest.iter().any(|&x| x != 0) {
        if parts.len() as i64 >= bound {
            return Err(Error::Invariant("conformal decomposition did not terminate".into()));
        }
        let supp = support(&rest);
        let sigma: Vec<i64> = supp.iter().map(|&i| rest[i].signum()).collect();
        let mut lp = LpProblem::new(vec![Rational::zero(); supp.len()]);
        for r in 0..matrix.row_count() {
            let row = supp
                .iter()
                .zip(&sigma)
                .map(|(&i, &s)| int(matrix.get(r, i) * s))
                .collect();
            lp.add_equality(row, Rational::zero());
        }
        lp.add_equality(vec![int(1); supp.len()], int(1));
        let res = solve_lp(&lp)?;
        let y = res
            .vertex
            .ok_or_else(|| Error::Invariant("conformal cone is empty for a nonzero lattice vector".into()))?;
        let level = y.iter().find(|x| !x.is_zero()).cloned().unwrap();
        if y.iter().any(|x| !x.is_zero() && *x != level) {
            return Err(Error::Invariant(
                "elementary chain does not rescale to a {0, ±1} vector; matrix is not TU".into(),
            ));
        }
        let mut part = vec![0i64; rest.len()];
        for ((&i, &s), yi) in supp.iter().zip(&sigma).zip(&y) {
            if !yi.is_zero() {
                part[i] = s;
                rest[i] -= s;
            }
        }
        parts.push(PrimitiveChain::new(part, lattice)?);
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn a2() -> ZonotopalLattice {
        ZonotopalLattice::unweighted(TuMatrix::verified(vec![vec![1, 1, 1]], 3).unwrap()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let x = to_rational_vec(&[1, 0, -1]);
        assert_eq!(inner_product(&x, &x, &to_rational_vec(&[1, 1, 1])).unwrap(), int(2));
        let r = inner_product(
            &to_rational_vec(&[1, -1]),
            &to_rational_vec(&[1, 1]),
            &to_rational_vec(&[1, 3]),
        );
        assert_eq!(r.unwrap(), int(-2));
        let zero = to_rational_vec(&[0, 0]);
        assert_eq!(inner_product(&zero, &to_rational_vec(&[5, 7]), &to_rational_vec(&[2, 9])).unwrap(), int(0));
        assert!(matches!(inner_product(&zero, &x, &x), Err(Error::Dimension(_))));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&[1i64, 0, -1]), vec![0, 2]);
        assert!(support(&[0i64, 0]).is_empty());
        assert_eq!(support(&[2i64, -1, -1]), vec![0, 1, 2]);
    }

    #[test]
    fn kernel_basis_examples() {
        let tri = TuMatrix::verified(vec![vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]], 3).unwrap();
        let b = kernel_basis(&tri);
        assert_eq!(b.len(), 1);
        assert_eq!(tri.mul_int(&b[0]), vec![0, 0, 0]);

        let id = TuMatrix::verified(vec![vec![1, 0], vec![0, 1]], 2).unwrap();
        assert!(kernel_basis(&id).is_empty());

        let ones = TuMatrix::verified(vec![vec![1, 1, 1]], 3).unwrap();
        let b = kernel_basis(&ones);
        assert_eq!(b.len(), 2);
        // (1,-1,0) and (0,1,-1) must be integral combinations of the basis
        for target in [[1i64, -1, 0], [0, 1, -1]] {
            let found = (-3..=3).any(|p: i64| {
                (-3..=3).any(|q: i64| (0..3).all(|i| p * b[0][i] + q * b[1][i] == target[i]))
            });
            assert!(found, "{target:?} not in the integral span of {b:?}");
        }
    }

    #[test]
    fn kernel_basis_of_non_tu_matrix_is_still_integral() {
        // x1 + x2 + x3 = 0, x1 = x2: generated by (1, 1, -2)
        let m = TuMatrix::asserted(vec![vec![1, 1, 1], vec![1, -1, 0]], 3).unwrap();
        let b = kernel_basis(&m);
        assert_eq!(b.len(), 1);
        assert!(b[0] == vec![1, 1, -2] || b[0] == vec![-1, -1, 2]);
        let z = TuMatrix::asserted(vec![], 2).unwrap();
        assert_eq!(kernel_basis(&z).len(), 2);
    }

    #[test]
    fn projection_examples() {
        let lat = a2();
        let p = lat.project(&to_rational_vec(&[1, 1, 1])).unwrap();
        assert_eq!(p, to_rational_vec(&[0, 0, 0]));

        let m = TuMatrix::verified(vec![vec![1, 1]], 2).unwrap();
        let lat = ZonotopalLattice::new(m, to_rational_vec(&[1, 3])).unwrap();
        let p = lat.project(&to_rational_vec(&[1, 0])).unwrap();
        assert_eq!(p, vec![ratio(1, 4), ratio(-1, 4)]);

        let lat = a2();
        let t = vec![ratio(7, 10), ratio(-1, 5), ratio(-1, 2)];
        assert_eq!(lat.project(&t).unwrap(), t);
    }

    #[test]
    fn projection_of_trivial_kernel_is_zero() {
        let id = TuMatrix::verified(vec![vec![1, 0], vec![0, 1]], 2).unwrap();
        let lat = ZonotopalLattice::unweighted(id).unwrap();
        assert_eq!(lat.project(&to_rational_vec(&[3, 4])).unwrap(), to_rational_vec(&[0, 0]));
    }

    #[test]
    fn lattice_rejects_bad_weights() {
        let m = TuMatrix::verified(vec![vec![1, 1]], 2).unwrap();
        assert!(ZonotopalLattice::new(m.clone(), to_rational_vec(&[1])).is_err());
        assert!(ZonotopalLattice::new(m, to_rational_vec(&[1, 0])).is_err());
    }

    #[test]
    fn primitive_chain_validation() {
        let lat = a2();
        let u = PrimitiveChain::new(vec![1, 0, -1], &lat).unwrap();
        assert_eq!(u.positive(), &[0]);
        assert_eq!(u.negative(), &[2]);
        assert!(PrimitiveChain::new(vec![1, 1, 0], &lat).is_err());
        assert!(PrimitiveChain::new(vec![2, -1, -1], &lat).is_err());
        // in the kernel of [1 1 1 1] but not support-minimal
        let a3 = ZonotopalLattice::unweighted(TuMatrix::verified(vec![vec![1, 1, 1, 1]], 4).unwrap()).unwrap();
        assert!(PrimitiveChain::new(vec![1, -1, 1, -1], &a3).is_err());
    }

    #[test]
    fn conformal_examples() {
        let lat = a2();
        let zero = Chain::new(vec![0, 0, 0], &lat).unwrap();
        assert!(conformal_decompose(&zero, &lat).unwrap().is_empty());

        let v = Chain::new(vec![1, 0, -1], &lat).unwrap();
        let parts = conformal_decompose(&v, &lat).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].coords(), &[1, 0, -1]);

        let v = Chain::new(vec![2, -1, -1], &lat).unwrap();
        let mut parts: Vec<IntVector> = conformal_decompose(&v, &lat)
            .unwrap()
            .into_iter()
            .map(|p| p.coords().to_vec())
            .collect();
        parts.sort();
        assert_eq!(parts, vec![vec![1, -1, 0], vec![1, 0, -1]]);
    }

    #[test]
    fn chain_membership() {
        let lat = a2();
        assert!(Chain::new(vec![1, 1, 1], &lat).is_err());
        assert!(conformal_decompose(&Chain { coords: vec![1, 1, 1] }, &lat).is_err());
    }
}
