use super::{make_currents, EitError, Phantom};
use crate::fem_disk::{boundary_trace, generate_disk_mesh, DiskMesh, NeumannSolver, NodalField};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Generator used for noise draws, recorded in data headers.
pub const RNG_NAME: &str = "ChaCha20Rng (rand_chacha 0.9), StandardNormal (rand_distr 0.5)";

/// Boundary voltages for every current pattern on the inversion mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    /// Noisy traces, one row per pattern, one column per boundary node.
    pub traces: Vec<Vec<f64>>,
    /// Traces before noise.
    pub clean: Vec<Vec<f64>>,
    pub eps: f64,
    pub seed: u64,
    /// Standard deviation of the added noise, `ε · max_k ‖φ_k‖∞`.
    pub noise_std: f64,
    pub mesh_id: String,
    pub data_mesh_id: String,
    pub n_cur: usize,
    pub rng: String,
}

impl MeasurementSet {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn boundary_len(&self) -> usize {
        self.traces.first().map_or(0, Vec::len)
    }
}

/// Linear interpolation of samples at `angles` (increasing, one period) to
/// `targets`, wrapping around 2π.
pub fn interpolate_periodic(angles: &[f64], values: &[f64], targets: &[f64]) -> Vec<f64> {
    let n = angles.len();
    targets
        .iter()
        .map(|&t| {
            let t = t.rem_euclid(2.0 * PI);
            let k = angles.partition_point(|&a| a <= t);
            let (i0, i1) = if k == 0 { (n - 1, 0) } else { (k - 1, k % n) };
            let a0 = if k == 0 { angles[n - 1] - 2.0 * PI } else { angles[i0] };
            let a1 = if k == n { angles[0] + 2.0 * PI } else { angles[i1] };
            let s = (t - a0) / (a1 - a0);
            values[i0] + s * (values[i1] - values[i0])
        })
        .collect()
}

/// Solves the forward problem for `sigma_true` on `data_mesh` for all
/// `2·n_cur` patterns, restricts the traces to the boundary of `inv_mesh` and
/// adds iid Gaussian noise per node and pattern with standard deviation
/// `eps · max_k ‖φ_k‖∞`.
pub fn synthesize_data(
    data_mesh: &DiskMesh,
    sigma_true: &NodalField,
    inv_mesh: &DiskMesh,
    n_cur: usize,
    eps: f64,
    seed: u64,
) -> Result<MeasurementSet, EitError> {
    let basis = make_currents(data_mesh, n_cur);
    let solver = NeumannSolver::new(data_mesh, sigma_true)?;
    let mut clean = Vec::with_capacity(basis.len());
    for (pattern, j) in basis.patterns.iter().enumerate() {
        let u = solver.solve(j).map_err(|source| EitError::Solver { pattern, source })?;
        let tr = boundary_trace(data_mesh, &u);
        let on_inv = interpolate_periodic(&data_mesh.boundary_angles, &tr.values, &inv_mesh.boundary_angles);
        let f = crate::fem_disk::BoundaryFunction::new(on_inv, inv_mesh.boundary_weights.clone());
        clean.push(f.zero_mean().values);
    }
    let max_amp = clean
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let noise_std = eps * max_amp;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let traces = clean
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    v + xi * noise_std
                })
                .collect()
        })
        .collect();
    Ok(MeasurementSet {
        traces,
        clean,
        eps,
        seed,
        noise_std,
        mesh_id: inv_mesh.id(),
        data_mesh_id: data_mesh.id(),
        n_cur,
        rng: RNG_NAME.to_string(),
    })
}

/// Samples `phantom` on the mesh one refinement finer than `inv_mesh` and
/// synthesizes data there, so the inversion never sees its own
/// discretization.
pub fn synthesize_from_phantom(
    phantom: &Phantom,
    inv_mesh: &DiskMesh,
    n_cur: usize,
    eps: f64,
    seed: u64,
) -> Result<MeasurementSet, EitError> {
    let fine = generate_disk_mesh(inv_mesh.refinement + 1);
    synthesize_data(&fine, &phantom.sample(&fine), inv_mesh, n_cur, eps, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_for_linear_and_wraps() {
        let angles: Vec<f64> = (0..8).map(|i| i as f64 * PI / 4.0).collect();
        let values: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let out = interpolate_periodic(&angles, &values, &[PI / 8.0, 7.5 * PI / 4.0, 2.0 * PI]);
        assert!((out[0] - 0.5).abs() < 1e-12);
        assert!((out[1] - 3.5).abs() < 1e-12);
        assert!(out[2].abs() < 1e-12);
    }
}
