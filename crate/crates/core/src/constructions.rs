//! Builders for the standard zonotopal lattice families.
//!
//! Incidence convention: the column of arc `(u, w)` has `−1` at the tail `u`
//! and `+1` at the head `w`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::ZonotopalLattice;
use crate::linalg;
use crate::matrix::{TuMatrix, TuStatus};
use crate::rational::{int, IntVector, Rational};

/// Tree flag per arc, `(parent, arc)` per vertex, depth per vertex.
type SpanningForest = (Vec<bool>, Vec<Option<(usize, usize)>>, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        for (a, &(u, w)) in arcs.iter().enumerate() {
            if u >= vertex_count || w >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "arc {a} = ({u}, {w}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == w {
                return Err(Error::InvalidInput(format!("arc {a} is a self-loop at vertex {u}")));
            }
        }
        Ok(Digraph { vertex_count, arcs })
    }

    /// Directed cycle `0 → 1 → … → n−1 → 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// Complete graph with arcs `i → j` for `i < j` (acyclic).
    pub fn complete(n: usize) -> Self {
        let arcs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Digraph { vertex_count: n, arcs }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Connected components of the underlying undirected graph.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut count = self.vertex_count;
        for &(u, w) in &self.arcs {
            let (a, b) = (find(&mut parent, u), find(&mut parent, w));
            if a != b {
                parent[a.max(b)] = a.min(b);
                count -= 1;
            }
        }
        count
    }

    fn incidence_rows(&self) -> Vec<Vec<i64>> {
        let mut rows = vec![vec![0i64; self.arcs.len()]; self.vertex_count];
        for (a, &(u, w)) in self.arcs.iter().enumerate() {
            rows[u][a] = -1;
            rows[w][a] = 1;
        }
        rows
    }

    /// Spanning forest by depth-first search from the lowest unvisited
    /// vertex, scanning incident arcs in index order. Returns the tree flag
    /// of every arc and, per vertex, `(parent, arc)` plus its depth.
    fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count;
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (a, &(u, w)) in self.arcs.iter().enumerate() {
            incident[u].push((a, w));
            incident[w].push((a, u));
        }
        let mut in_tree = vec![false; self.arcs.len()];
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (x, ref mut next)) = stack.last_mut() {
                if *next == incident[x].len() {
                    stack.pop();
                    continue;
                }
                let (a, y) = incident[x][*next];
                *next += 1;
                if !seen[y] {
                    seen[y] = true;
                    in_tree[a] = true;
                    parent[y] = Some((x, a));
                    depth[y] = depth[x] + 1;
                    stack.push((y, 0));
                }
            }
        }
        (in_tree, parent, depth)
    }

    /// Signed fundamental cycle of each non-forest arc, in arc order. Rows
    /// span the cycle space of the digraph.
    pub fn fundamental_cycles(&self) -> Vec<IntVector> {
        let (in_tree, parent, depth) = self.spanning_forest();
        let m = self.arcs.len();
        let mut rows = Vec::new();
        for (a, &(u, w)) in self.arcs.iter().enumerate() {
            if in_tree[a] {
                continue;
            }
            let mut row = vec![0i64; m];
            row[a] = 1;
            // walk the tree path from the head w back to the tail u
            let (mut x, mut y) = (w, u);
            let mut down = Vec::new();
            while x != y {
                if depth[x] >= depth[y] {
                    let (p, e) = parent[x].expect("non-root vertex has a parent");
                    // traversal x -> p
                    row[e] += if self.arcs[e].0 == x { 1 } else { -1 };
                    x = p;
                } else {
                    let (p, e) = parent[y].expect("non-root vertex has a parent");
                    down.push((p, y, e));
                    y = p;
                }
            }
            for (p, child, e) in down {
                // traversal p -> child
                row[e] += if self.arcs[e].0 == p { 1 } else { -1 };
                let _ = child;
            }
            rows.push(row);
        }
        rows
    }
}

pub fn incidence_matrix(d: &Digraph) -> Result<TuMatrix> {
    TuMatrix::verified_or_asserted(d.incidence_rows(), d.arc_count())
}

fn weights_or_unit(weights: Option<Vec<Rational>>, m: usize) -> Vec<Rational> {
    weights.unwrap_or_else(|| vec![int(1); m])
}

/// Integral flow lattice `ker M(D) ∩ ℤ^A`; primitive chains are signed simple cycles.
pub fn graphic_lattice(d: &Digraph, weights: Option<Vec<Rational>>) -> Result<ZonotopalLattice> {
    let g = weights_or_unit(weights, d.arc_count());
    ZonotopalLattice::new(incidence_matrix(d)?, g)
}

/// Integral cut lattice `ker M(D)^⊥ ∩ ℤ^A`, represented as the kernel of the
/// fundamental-cycle (network) matrix of a spanning forest; primitive chains
/// are signed bonds.
pub fn cographic_lattice(d: &Digraph, weights: Option<Vec<Rational>>) -> Result<ZonotopalLattice> {
    let g = weights_or_unit(weights, d.arc_count());
    let matrix = TuMatrix::verified_or_asserted(d.fundamental_cycles(), d.arc_count())?;
    ZonotopalLattice::new(matrix, g)
}

/// Gram matrix `G_ij = b_iᵀ b_j` of an obtuse superbasis `b_0, …, b_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObtuseSuperbasisGram {
    gram: Vec<Vec<Rational>>,
}

impl ObtuseSuperbasisGram {
    /// Validates symmetry and the three superbasis conditions: the minor on
    /// indices `1..n` is positive definite (i), rows sum to zero (ii) and
    /// off-diagonal entries are nonpositive (iii).
    pub fn new(gram: Vec<Vec<Rational>>) -> Result<Self> {
        let size = gram.len();
        if size < 2 {
            return Err(Error::InvalidInput("superbasis Gram needs at least 2 rows".into()));
        }
        if gram.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension("superbasis Gram must be square".into()));
        }
        for i in 0..size {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidInput(format!("Gram is not symmetric at ({i}, {j})")));
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            let s: Rational = row.iter().sum();
            if !s.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "condition (ii) violated: row {i} sums to {s}, superbasis vectors must sum to zero"
                )));
            }
        }
        for i in 0..size {
            for j in 0..size {
                if i != j && gram[i][j].is_positive() {
                    return Err(Error::InvalidInput(format!(
                        "condition (iii) violated: entry ({i}, {j}) = {} is positive",
                        gram[i][j]
                    )));
                }
            }
        }
        let minor: Vec<Vec<Rational>> = gram[1..].iter().map(|r| r[1..].to_vec()).collect();
        if !linalg::is_positive_definite(&minor) {
            return Err(Error::InvalidInput(
                "condition (i) violated: b_1, ..., b_n do not form a basis (minor not positive definite)".into(),
            ));
        }
        Ok(ObtuseSuperbasisGram { gram })
    }

    pub fn size(&self) -> usize {
        self.gram.len()
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Delone graph: arc `i → j` for `i < j` whenever `G_ij < 0`, with weight `−G_ij`.
    pub fn delone_graph(&self) -> (Digraph, Vec<Rational>) {
        let n = self.size();
        let mut arcs = Vec::new();
        let mut weights = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.gram[i][j].is_negative() {
                    arcs.push((i, j));
                    weights.push(-&self.gram[i][j]);
                }
            }
        }
        (Digraph { vertex_count: n, arcs }, weights)
    }
}

/// The lattice of Voronoi's first kind with the given superbasis Gram, as a
/// cographic lattice of its Delone graph, together with the incidence rows
/// `v_0, …, v_n` which form an isometric obtuse superbasis.
pub fn voronoi_first_kind(gram: &ObtuseSuperbasisGram) -> Result<(ZonotopalLattice, Vec<IntVector>)> {
    let (graph, weights) = gram.delone_graph();
    // Conditions (i)-(ii) force the Delone graph to be connected: a split
    // V1 ∪ V2 with no arc between them makes Σ_{V1} b_i orthogonal to every
    // b_j, hence zero, contradicting independence of b_1, ..., b_n.
    if graph.component_count() != 1 {
        return Err(Error::Invariant("Delone graph of a valid superbasis is disconnected".into()));
    }
    let lattice = cographic_lattice(&graph, Some(weights))?;
    let rows = graph.incidence_rows();
    debug_assert!(rows.iter().all(|r| lattice.contains(r)));
    Ok((lattice, rows))
}

/// `A_n = {x ∈ ℤ^{n+1} : Σ x_i = 0}`.
pub fn a_n_lattice(n: usize, weights: Option<Vec<Rational>>) -> Result<ZonotopalLattice> {
    if n == 0 {
        return Err(Error::InvalidInput("A_n needs n >= 1".into()));
    }
    let g = weights_or_unit(weights, n + 1);
    ZonotopalLattice::new(TuMatrix::verified(vec![vec![1; n + 1]], n + 1)?, g)
}

/// Coordinate of `e_i ⊗ f_j` (`0 ≤ i ≤ m`, `0 ≤ j ≤ n`).
pub fn tensor_index(n: usize, i: usize, j: usize) -> usize {
    i * (n + 1) + j
}

/// The standard basis `b_i ⊗ c_j = e_i⊗f_j − e_i⊗f_{j+1} − e_{i+1}⊗f_j + e_{i+1}⊗f_{j+1}`.
pub fn tensor_basis(m: usize, n: usize) -> Vec<IntVector> {
    let dim = (m + 1) * (n + 1);
    let mut out = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let mut v = vec![0i64; dim];
            v[tensor_index(n, i, j)] = 1;
            v[tensor_index(n, i, j + 1)] = -1;
            v[tensor_index(n, i + 1, j)] = -1;
            v[tensor_index(n, i + 1, j + 1)] = 1;
            out.push(v);
        }
    }
    out
}

/// The complete bipartite digraph `K_{m+1,n+1}` with every arc directed from
/// left vertex `i` to right vertex `m + 1 + j`, arcs in `tensor_index` order.
pub fn complete_bipartite(m: usize, n: usize) -> Digraph {
    let mut arcs = Vec::with_capacity((m + 1) * (n + 1));
    for i in 0..=m {
        for j in 0..=n {
            arcs.push((i, m + 1 + j));
        }
    }
    Digraph { vertex_count: m + n + 2, arcs }
}

/// `A_m ⊗ A_n` as the graphic lattice of `K_{m+1,n+1}`.
pub fn tensor_lattice(m: usize, n: usize, weights: Option<Vec<Rational>>) -> Result<ZonotopalLattice> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("tensor lattice needs m, n >= 1".into()));
    }
    let lattice = graphic_lattice(&complete_bipartite(m, n), weights)?;
    for (k, b) in tensor_basis(m, n).iter().enumerate() {
        if !lattice.contains(b) {
            return Err(Error::Invariant(format!("tensor basis vector {k} is not a flow of K_{{m+1,n+1}}")));
        }
    }
    if lattice.rank() != m * n {
        return Err(Error::Invariant(format!("tensor lattice rank {} != {}", lattice.rank(), m * n)));
    }
    Ok(lattice)
}

/// Minor `(L ∖ S) / T`: deletion restricts to vectors vanishing on `S`,
/// contraction projects away the coordinates in `T`.
pub fn minor(lattice: &ZonotopalLattice, delete: &[usize], contract: &[usize]) -> Result<ZonotopalLattice> {
    let m = lattice.dim();
    let mut role = vec![0u8; m];
    for &i in delete {
        if i >= m {
            return Err(Error::InvalidInput(format!("deleted index {i} out of range")));
        }
        role[i] = 1;
    }
    for &i in contract {
        if i >= m {
            return Err(Error::InvalidInput(format!("contracted index {i} out of range")));
        }
        if role[i] == 1 {
            return Err(Error::InvalidInput(format!("index {i} is both deleted and contracted")));
        }
        role[i] = 2;
    }
    let mut rows = lattice.matrix().to_rows();
    let mut contract_sorted = contract.to_vec();
    contract_sorted.sort_unstable();
    contract_sorted.dedup();
    for &j in &contract_sorted {
        // Eliminate x_j using a row that involves it; with no such row the
        // coordinate is unconstrained and the column is simply dropped.
        let Some(r) = rows.iter().position(|row| row[j] != 0) else {
            continue;
        };
        let pivot = rows.remove(r);
        for row in rows.iter_mut() {
            if row[j] == 0 {
                continue;
            }
            let f = row[j] * pivot[j];
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= f * p;
            }
            if row.iter().any(|x| x.abs() > 1) {
                return Err(Error::NotTotallyUnimodular);
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| role[i] == 0).collect();
    if keep.is_empty() {
        return Err(Error::InvalidInput("minor removes every coordinate".into()));
    }
    let new_rows: Vec<Vec<i64>> = rows
        .iter()
        .map(|row| keep.iter().map(|&c| row[c]).collect::<Vec<i64>>())
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect();
    let weights: Vec<Rational> = keep.iter().map(|&c| lattice.weights()[c].clone()).collect();
    let matrix = match lattice.matrix().status() {
        TuStatus::Verified => TuMatrix::verified_or_asserted(new_rows, keep.len())?,
        TuStatus::Asserted => TuMatrix::asserted(new_rows, keep.len())?,
    };
    ZonotopalLattice::new(matrix, weights)
}
