//! Exact closest vector solver for zonotopal lattices.
//!
//! A zonotopal lattice is the integer kernel `L = {x ∈ ℤ^m : Mx = 0}` of a
//! totally unimodular matrix `M`, measured with a weighted inner product
//! `(x, y)_g = Σ g_i x_i y_i`. Its Voronoi cell is the projection of the cube
//! `[−1/2, 1/2]^m` and its strict Voronoi vectors are exactly the primitive
//! chains of `ker M`, which is what lets a minimum mean cycle canceling
//! method solve CVP on it exactly.
//!
//! * [`lattice`] and [`matrix`]: data types, inner product, projection,
//!   kernel basis, conformal decomposition.
//! * [`constructions`]: graphic, cographic, Voronoi's-first-kind, `A_n`,
//!   `A_m ⊗ A_n` lattices and minors.
//! * [`simplex`]: exact rational LP.
//! * [`mmcc`]: the CVP solver.
//! * [`oracle`]: brute-force ground truth used to certify answers.
//! * [`cli`]: file formats and the `zonolat` command line.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod mmcc;
pub mod oracle;
pub mod rational;
pub mod simplex;

pub use error::{Error, Result};
pub use lattice::{
    conformal_decompose, inner_product, kernel_basis, project_onto_span, support, Chain,
    PrimitiveChain, ZonotopalLattice,
};
pub use matrix::{TuMatrix, TuStatus};
pub use mmcc::{solve_cvp, CvpInstance, CvpSolution, SolveOptions, StepRule};
pub use rational::{IntVector, Rational};
