//! Quadratic Wasserstein distance on the circle and its use as a data misfit
//! for electrical impedance tomography on the unit disk.
//!
//! The crate is organised in four layers:
//!
//! - [`circle_ot`]: the O(N) one-parameter solver for W₂² between periodic
//!   densities, the optimal map and the Kantorovich potential.
//! - [`oracle`]: slow, independent reference computations (line formula,
//!   dense α grid search, exhaustive matching of atoms) used for validation.
//! - [`fem_disk`]: P1 finite elements on a polar mesh of the unit disk, the
//!   Neumann-to-Dirichlet map, adjoint gradient densities and the H¹₀ smoother.
//! - [`eit`]: objective, adjoint-state gradient, Barzilai–Borwein inversion and
//!   landscape scans.
//!
//! [`io`] holds the plain-text formats (CSV densities and fields, key=value
//! configs, JSON summaries).

pub mod circle_ot;
pub mod eit;
pub mod fem_disk;
pub mod io;
pub mod oracle;

pub use circle_ot::{
    w2_circle, AlphaSolution, CdfTable, OtError, PeriodicDensity, PotentialGrid, TransportMap,
};
