use super::{make_currents, misfit_and_boundary_gradient, CurrentBasis, EitError, InversionConfig, MeasurementSet, Misfit};
use crate::fem_disk::{
    adjoint_gradient_density, boundary_trace, BoundaryFunction, DiskMesh, FieldRole, H1Form,
    NeumannSolver, NodalField, SobolevSmoother,
};

/// Smoothing parameter of the total variation term.
pub const TV_KAPPA: f64 = 1e-6;

/// Objective value with its raw and H¹₀-smoothed gradients.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Misfit plus `β R(σ)`.
    pub value: f64,
    pub misfit: f64,
    pub regularization: f64,
    /// Gradient density in the lumped L²(Ω) pairing, before smoothing.
    pub raw_gradient: NodalField,
    pub sobolev_gradient: NodalField,
}

/// `R(σ) = Σ_T |T| √(|∇σ|² + κ²)` and its gradient density in the lumped
/// L² pairing.
pub fn total_variation(mesh: &DiskMesh, sigma: &[f64], kappa: f64) -> (f64, Vec<f64>) {
    let mut value = 0.0;
    let mut grad = vec![0.0; mesh.node_count()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let g = &mesh.basis_gradients[t];
        let mut gs = [0.0; 2];
        for k in 0..3 {
            gs[0] += sigma[tri[k]] * g[k][0];
            gs[1] += sigma[tri[k]] * g[k][1];
        }
        let norm = (gs[0] * gs[0] + gs[1] * gs[1] + kappa * kappa).sqrt();
        value += mesh.areas[t] * norm;
        for k in 0..3 {
            grad[tri[k]] += mesh.areas[t] * (gs[0] * g[k][0] + gs[1] * g[k][1]) / norm;
        }
    }
    for (v, l) in grad.iter_mut().zip(&mesh.lumped_areas) {
        *v /= l;
    }
    (value, grad)
}

/// Data, currents and cached operators for evaluating the objective on one
/// mesh.
pub struct Objective<'a> {
    mesh: &'a DiskMesh,
    basis: CurrentBasis,
    measured: Vec<BoundaryFunction>,
    cfg: InversionConfig,
    smoother: SobolevSmoother<'a>,
    h1: H1Form,
}

impl<'a> Objective<'a> {
    pub fn new(mesh: &'a DiskMesh, data: &MeasurementSet, cfg: &InversionConfig) -> Result<Self, EitError> {
        cfg.validate()?;
        let basis = make_currents(mesh, data.n_cur);
        if data.len() != basis.len() {
            return Err(EitError::SizeMismatch {
                expected: basis.len(),
                got: data.len(),
            });
        }
        if data.boundary_len() != mesh.boundary_len() {
            return Err(EitError::SizeMismatch {
                expected: mesh.boundary_len(),
                got: data.boundary_len(),
            });
        }
        // noise breaks the exact zero mean of the traces
        let measured = data
            .traces
            .iter()
            .map(|t| BoundaryFunction::new(t.clone(), mesh.boundary_weights.clone()).zero_mean())
            .collect();
        Ok(Self {
            mesh,
            basis,
            measured,
            cfg: cfg.clone(),
            smoother: SobolevSmoother::new(mesh)?,
            h1: H1Form::new(mesh),
        })
    }

    pub fn mesh(&self) -> &DiskMesh {
        self.mesh
    }

    pub fn config(&self) -> &InversionConfig {
        &self.cfg
    }

    pub fn basis(&self) -> &CurrentBasis {
        &self.basis
    }

    /// Measured traces with their arclength mean removed.
    pub fn measured(&self) -> &[BoundaryFunction] {
        &self.measured
    }

    pub fn h1(&self) -> &H1Form {
        &self.h1
    }

    pub fn smoother(&self) -> &SobolevSmoother<'a> {
        &self.smoother
    }

    fn cfg_for(&self, misfit: Misfit) -> InversionConfig {
        InversionConfig {
            misfit,
            ..self.cfg.clone()
        }
    }

    fn regularization(&self, sigma: &NodalField) -> (f64, Option<Vec<f64>>) {
        if self.cfg.beta > 0.0 {
            let (r, g) = total_variation(self.mesh, &sigma.values, TV_KAPPA);
            (self.cfg.beta * r, Some(g))
        } else {
            (0.0, None)
        }
    }

    /// Predicted traces `Λ(σ) j_n` for every pattern.
    pub fn traces(&self, sigma: &NodalField) -> Result<Vec<BoundaryFunction>, EitError> {
        let solver = NeumannSolver::new(self.mesh, sigma)?;
        self.basis
            .patterns
            .iter()
            .enumerate()
            .map(|(pattern, j)| {
                let u = solver.solve(j).map_err(|source| EitError::Solver { pattern, source })?;
                Ok(boundary_trace(self.mesh, &u))
            })
            .collect()
    }

    /// Objective value only (forward solves, no adjoints).
    pub fn value(&self, sigma: &NodalField, misfit: Misfit) -> Result<f64, EitError> {
        let cfg = self.cfg_for(misfit);
        let mut total = 0.0;
        for (tr, phi) in self.traces(sigma)?.iter().zip(&self.measured) {
            total += misfit_and_boundary_gradient(tr, phi, &cfg)?.0;
        }
        Ok(total + self.regularization(sigma).0)
    }

    /// Objective, adjoint-state gradient and its Sobolev smoothing.
    pub fn evaluate(&self, sigma: &NodalField, misfit: Misfit) -> Result<Evaluation, EitError> {
        let cfg = self.cfg_for(misfit);
        let solver = NeumannSolver::new(self.mesh, sigma)?;
        let mut total = 0.0;
        let mut grad = vec![0.0; self.mesh.node_count()];
        for (pattern, (j, phi)) in self.basis.patterns.iter().zip(&self.measured).enumerate() {
            let wrap = |source| EitError::Solver { pattern, source };
            let u = solver.solve(j).map_err(wrap)?;
            let (v, h) = misfit_and_boundary_gradient(&boundary_trace(self.mesh, &u), phi, &cfg)?;
            total += v;
            let ut = solver.solve(&h).map_err(wrap)?;
            let d = adjoint_gradient_density(self.mesh, &u, &ut)?;
            for (g, x) in grad.iter_mut().zip(&d.values) {
                *g += x;
            }
        }
        let (reg, reg_grad) = self.regularization(sigma);
        if let Some(rg) = reg_grad {
            for (g, r) in grad.iter_mut().zip(rg) {
                *g += self.cfg.beta * r;
            }
        }
        let raw = NodalField::new(grad, FieldRole::GradientDensity);
        let sobolev_gradient = self.smoother.smooth(&raw)?;
        Ok(Evaluation {
            value: total + reg,
            misfit: total,
            regularization: reg,
            raw_gradient: raw,
            sobolev_gradient,
        })
    }
}

/// One-shot objective and smoothed gradient for `cfg.misfit`.
pub fn objective_and_gradient(
    mesh: &DiskMesh,
    sigma: &NodalField,
    data: &MeasurementSet,
    cfg: &InversionConfig,
) -> Result<(f64, NodalField), EitError> {
    let e = Objective::new(mesh, data, cfg)?.evaluate(sigma, cfg.misfit)?;
    Ok((e.value, e.sobolev_gradient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem_disk::generate_disk_mesh;

    #[test]
    fn total_variation_of_linear_field() {
        let m = generate_disk_mesh(2);
        let s: Vec<f64> = m.nodes.iter().map(|p| 3.0 * p[0] + 4.0 * p[1]).collect();
        let (r, _) = total_variation(&m, &s, 0.0);
        let area: f64 = m.areas.iter().sum();
        assert!((r - 5.0 * area).abs() < 1e-10);
        let c = vec![1.0; m.node_count()];
        let (r0, g0) = total_variation(&m, &c, TV_KAPPA);
        assert!((r0 - TV_KAPPA * area).abs() < 1e-15);
        assert!(g0.iter().all(|v| v.abs() < 1e-6));
    }
}
