//! Conductivity reconstruction from Neumann-to-Dirichlet data.
//!
//! The objective sums a boundary misfit over current patterns, either the
//! quadratic Wasserstein distance between normalised traces or the L² norm.
//! Gradients come from one adjoint solve per pattern and are smoothed into
//! H¹₀ before the nonmonotone Barzilai–Borwein iteration uses them.

mod config;
mod currents;
mod data;
mod invert;
mod landscape;
mod misfit;
mod objective;
mod phantom;

pub use config::{InversionConfig, Misfit};
pub use currents::{make_currents, CurrentBasis};
pub use data::{interpolate_periodic, synthesize_data, synthesize_from_phantom, MeasurementSet, RNG_NAME};
pub use invert::{bb_invert, InversionRun, IterationRecord, StopReason, MAX_BACKTRACKS};
pub use landscape::{landscape_scan, LandscapeGrid, LandscapePoint};
pub use misfit::{misfit_and_boundary_gradient, normalize_trace};
pub use objective::{objective_and_gradient, total_variation, Evaluation, Objective, TV_KAPPA};
pub use phantom::{relative_l2_error, Inclusion, Phantom, Shape};

use crate::circle_ot::OtError;
use crate::fem_disk::FemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EitError {
    #[error("pattern {pattern}: {source}")]
    Solver {
        pattern: usize,
        #[source]
        source: FemError,
    },
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error("transport: {0}")]
    Transport(#[from] OtError),
    #[error("normalised trace has minimum {min:.3e} below the density floor; increase a (now {a})")]
    Normalization { min: f64, a: f64 },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}
