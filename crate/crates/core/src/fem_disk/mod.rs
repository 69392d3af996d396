//! Linear finite elements on the unit disk.
//!
//! The forward model is the Neumann problem `−∇·(σ∇u) = 0` in the disk with
//! `σ ∂u/∂n = j` on the circle and `∮ u ds = 0`. Its boundary trace defines the
//! Neumann-to-Dirichlet map `Λ(σ) j`. The module also provides the adjoint
//! gradient density `−∇ũ·∇u` and the `(I − Δ)` smoother with homogeneous
//! Dirichlet data used to precondition gradients.

mod fields;
mod mesh;
mod skyline;
mod solver;

pub use fields::{BoundaryFunction, FieldRole, NodalField};
pub use mesh::{generate_disk_mesh, DiskMesh, BASE_RINGS, DEFAULT_REFINEMENT};
pub use skyline::{CholeskyFactor, SkylineMatrix};
pub use solver::{
    adjoint_gradient_density, assemble_stiffness, boundary_trace, solve_forward, H1Form,
    NeumannSolver, SobolevSmoother, RESIDUAL_TOL,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FemError {
    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("boundary current has nonzero mean {mean:e}")]
    NonZeroMeanCurrent { mean: f64 },
    #[error("conductivity {value} at node {node} is not positive")]
    NonPositiveConductivity { node: usize, value: f64 },
    #[error("constrained residual {0:e} exceeds tolerance")]
    Residual(f64),
}

/// Convenience wrapper for [`SobolevSmoother`] that factors on every call.
pub fn sobolev_smooth(mesh: &DiskMesh, g: &NodalField) -> Result<NodalField, FemError> {
    SobolevSmoother::new(mesh)?.smooth(g)
}
