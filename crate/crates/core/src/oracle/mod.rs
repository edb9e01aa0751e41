//! Brute-force ground truth, independent of the LP-based solver.
//!
//! Everything here works by exhaustive enumeration with exact arithmetic and
//! is only meant for desk-scale lattices; size caps live in [`OracleLimits`].

pub mod cvp;
pub mod tu;
pub mod voronoi;

pub use cvp::{brute_force_cvp, certify_closest};
pub use tu::check_tu;
pub use voronoi::{
    check_projection_theorem, count_projection_violations, enumerate_primitive_chains,
    is_strict_voronoi_by_coset, voronoi_relevant_count, VoronoiCellDescription,
};

/// Enumeration caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest `m` for the `3^m` primitive-chain scan.
    pub max_coords: usize,
    /// Largest lattice rank for coefficient-box CVP enumeration.
    pub max_rank: usize,
    /// Largest coefficient-box radius tried before giving up.
    pub max_radius: i64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_coords: 14, max_rank: 8, max_radius: 8 }
    }
}
