//! Circumcentered reflections for two-set convex feasibility.
//!
//! The crate provides exact projections onto half-spaces, polyhedra,
//! finitely generated cones, rays and linear subspaces; the circumcentered
//! reflection method (direct and product-space), alternating projections and
//! Douglas–Rachford drivers with full traces; the sphere-centered analogue on
//! S² for pairs of proper cones in R³; and a scenario registry with seeded
//! random instance generators.

pub mod crm;
pub mod error;
pub mod geometry;
pub mod scenario;
pub mod sets;
pub mod sphere;
pub mod trace_csv;
pub mod vector;

pub use crm::{
    crm_operator, in_kernel_ct, run_crm, run_crm_product_space, run_dr, run_map, CardinalityCase, CrmStep,
    IterationTrace, Termination, DEFAULT_MAX_ITERS,
};
pub use error::{Error, Result};
pub use geometry::{circumcenter, solve_gram};
pub use scenario::{Expectation, Scenario};
pub use sets::{ConeV, ConvexSet, HalfSpace, LinearSubspace, Polyhedron, Ray};
pub use vector::{Tolerance, Vector};
