//! Optimal transport between strictly positive densities on S¹ = ℝ/ℤ.
//!
//! Both densities are lifted to periodic functions on ℝ with cumulative
//! distributions satisfying `F(t + 1) = F(t) + 1`. The circular problem then
//! reduces to a one-dimensional minimisation over a mass shift α:
//!
//! ```text
//! W₂²(f, g) = min_α I(α),   I(α) = ∫₀¹ |F⁻¹(t) − G⁻¹(t − α)|² dt
//! ```
//!
//! `I` is strictly convex with its minimiser in (−1, 1). Its first two
//! derivatives are exact integrals of the piecewise-linear composite
//! `F⁻¹(G(y) + α)`, evaluated in O(N) by merging the two breakpoint sequences,
//! so Newton's method solves the whole problem in O(N log log 1/ε).

mod cdf;
mod density;
mod merge;
mod solve;
mod transport;

pub use cdf::{build_cdf, CdfTable};
pub use density::{PeriodicDensity, DENSITY_FLOOR};
pub use solve::{
    eval_i_derivatives, solve_alpha, solve_alpha_with, w2_circle, AlphaSolution, IDerivatives,
    NewtonOptions, DEFAULT_EPS, DEFAULT_MAX_ITER,
};
pub use transport::{kantorovich_potential, optimal_map, PotentialGrid, TransportMap};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OtError {
    #[error("density is empty")]
    Empty,
    #[error("density sample {index} is not strictly positive ({value})")]
    NonPositive { index: usize, value: f64 },
    #[error("density sample {index} is {value} after normalisation, below the floor {floor}")]
    BelowFloor { index: usize, value: f64, floor: f64 },
    #[error("grid sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("shift α = {0} is outside (-1, 1)")]
    AlphaOutOfRange(f64),
    #[error("merged breakpoints out of order at y = {at} (previous {prev})")]
    DegenerateSegment { prev: f64, at: f64 },
    #[error("Newton iteration did not converge after {iterations} steps (last α = {last_alpha})")]
    NoConvergence { iterations: usize, last_alpha: f64 },
    #[error("solution is not stationary for this density pair (|I'(α)| = {residual})")]
    MismatchedSolution { residual: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}
