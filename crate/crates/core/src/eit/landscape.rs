use super::{misfit_and_boundary_gradient, EitError, InversionConfig, Misfit, Objective, Phantom};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Candidate inclusion centres in polar coordinates for a disk of known
/// radius and conductivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    pub inclusion_radius: f64,
    pub inclusion_value: f64,
}

impl LandscapeGrid {
    /// 11 radii from 0.25 to 0.75 and 16 angles `kπ/8` for a disk of radius
    /// 0.22 and conductivity 2.
    pub fn standard() -> Self {
        Self {
            radii: (0..11).map(|i| 0.25 + 0.05 * i as f64).collect(),
            angles: (0..16).map(|k| k as f64 * PI / 8.0).collect(),
            inclusion_radius: 0.22,
            inclusion_value: 2.0,
        }
    }

    /// Single ring of candidates at radius `r` with `n` angles.
    pub fn ring(r: f64, n: usize) -> Self {
        Self {
            radii: vec![r],
            angles: (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect(),
            ..Self::standard()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub r: f64,
    pub theta: f64,
    pub w2: f64,
    pub l2: f64,
}

impl LandscapePoint {
    pub fn value(&self, misfit: Misfit) -> f64 {
        match misfit {
            Misfit::W2 => self.w2,
            Misfit::L2 => self.l2,
        }
    }
}

/// Evaluates both misfits for every candidate centre of the grid. Rows are
/// ordered by radius, then angle.
pub fn landscape_scan(obj: &Objective, grid: &LandscapeGrid) -> Result<Vec<LandscapePoint>, EitError> {
    let cfg_of = |misfit| InversionConfig {
        misfit,
        beta: 0.0,
        ..obj.config().clone()
    };
    let (cw, cl) = (cfg_of(Misfit::W2), cfg_of(Misfit::L2));
    let mut out = Vec::with_capacity(grid.radii.len() * grid.angles.len());
    for &r in &grid.radii {
        for &theta in &grid.angles {
            let sigma = Phantom::polar_disk(r, theta, grid.inclusion_radius, grid.inclusion_value)
                .sample(obj.mesh());
            let (mut w2, mut l2) = (0.0, 0.0);
            for (tr, phi) in obj.traces(&sigma)?.iter().zip(obj.measured()) {
                w2 += misfit_and_boundary_gradient(tr, phi, &cw)?.0;
                l2 += misfit_and_boundary_gradient(tr, phi, &cl)?.0;
            }
            out.push(LandscapePoint { r, theta, w2, l2 });
        }
    }
    Ok(out)
}
