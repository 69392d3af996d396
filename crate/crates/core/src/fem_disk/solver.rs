use super::{BoundaryFunction, CholeskyFactor, DiskMesh, FemError, FieldRole, NodalField, SkylineMatrix};

/// Largest accepted relative residual of the constrained Neumann system.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Relative size of `∮ j ds` tolerated for a Neumann current.
const MEAN_TOL: f64 = 1e-8;

fn envelope(mesh: &DiskMesh, boundary_block: bool) -> SkylineMatrix {
    let tri = mesh
        .triangles
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
    let b = &mesh.boundary;
    let block = if boundary_block {
        // boundary nodes are numbered last and contiguously
        vec![(b[b.len() - 1], b[0])]
    } else {
        Vec::new()
    };
    SkylineMatrix::with_pattern(mesh.node_count(), tri.chain(block))
}

fn add_stiffness(m: &mut SkylineMatrix, mesh: &DiskMesh, coef: impl Fn(usize) -> f64) {
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let g = &mesh.basis_gradients[t];
        let c = coef(t) * mesh.areas[t];
        for a in 0..3 {
            for b in 0..=a {
                let v = c * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                if a == b {
                    m.add(tri[a], tri[a], v);
                } else {
                    m.add(tri[a], tri[b], v);
                }
            }
        }
    }
}

fn add_mass(m: &mut SkylineMatrix, mesh: &DiskMesh) {
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let a = mesh.areas[t] / 12.0;
        for i in 0..3 {
            m.add(tri[i], tri[i], 2.0 * a);
            for j in 0..i {
                m.add(tri[i], tri[j], a);
            }
        }
    }
}

/// Per-triangle conductivity: the mean of the three nodal values.
fn triangle_sigma(mesh: &DiskMesh, sigma: &NodalField) -> Result<Vec<f64>, FemError> {
    sigma.check(mesh)?;
    if let Some((node, &value)) = sigma.values.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(FemError::NonPositiveConductivity { node, value });
    }
    Ok(mesh
        .triangles
        .iter()
        .map(|t| (sigma.values[t[0]] + sigma.values[t[1]] + sigma.values[t[2]]) / 3.0)
        .collect())
}

/// Stiffness matrix `∫ σ ∇φ_i·∇φ_j` with one-point quadrature for `σ`.
pub fn assemble_stiffness(mesh: &DiskMesh, sigma: &NodalField) -> Result<SkylineMatrix, FemError> {
    let st = triangle_sigma(mesh, sigma)?;
    let mut k = envelope(mesh, false);
    add_stiffness(&mut k, mesh, |t| st[t]);
    Ok(k)
}

/// Factored Neumann problem for one conductivity.
///
/// The mean constraint `wᵀu = 0` (lumped boundary weights `w`) enters through
/// a scalar multiplier. The saddle system is reduced with the SPD matrix
/// `K + wwᵀ`, factored once and reused for every current pattern.
#[derive(Debug, Clone)]
pub struct NeumannSolver<'a> {
    mesh: &'a DiskMesh,
    stiffness: SkylineMatrix,
    factor: CholeskyFactor,
    w: Vec<f64>,
    z: Vec<f64>,
    wz: f64,
}

impl<'a> NeumannSolver<'a> {
    pub fn new(mesh: &'a DiskMesh, sigma: &NodalField) -> Result<Self, FemError> {
        let st = triangle_sigma(mesh, sigma)?;
        let mut k = envelope(mesh, true);
        add_stiffness(&mut k, mesh, |t| st[t]);
        let mut w = vec![0.0; mesh.node_count()];
        for (&i, &wb) in mesh.boundary.iter().zip(&mesh.boundary_weights) {
            w[i] = wb;
        }
        let mut kt = k.clone();
        for (a, &i) in mesh.boundary.iter().enumerate() {
            for &j in &mesh.boundary[..=a] {
                kt.add(i, j, w[i] * w[j]);
            }
        }
        let factor = kt.cholesky()?;
        let z = factor.solve(&w);
        let wz = dot(&w, &z);
        Ok(Self {
            mesh,
            stiffness: k,
            factor,
            w,
            z,
            wz,
        })
    }

    pub fn mesh(&self) -> &DiskMesh {
        self.mesh
    }

    /// Solves `Ku + wλ = b`, `wᵀu = 0` for a nodal load and checks the
    /// residual of the full constrained system.
    pub fn solve_load(&self, b: &[f64]) -> Result<Vec<f64>, FemError> {
        let y = self.factor.solve(b);
        let lambda = dot(&self.w, &y) / self.wz;
        let u: Vec<f64> = y.iter().zip(&self.z).map(|(a, z)| a - lambda * z).collect();
        let ku = self.stiffness.matvec(&u);
        let r2: f64 = ku
            .iter()
            .zip(&self.w)
            .zip(b)
            .map(|((k, w), b)| (k + w * lambda - b).powi(2))
            .sum::<f64>()
            + dot(&self.w, &u).powi(2);
        let bn = dot(b, b).sqrt();
        if bn > 0.0 && r2.sqrt() > RESIDUAL_TOL * bn {
            return Err(FemError::Residual(r2.sqrt() / bn));
        }
        Ok(u)
    }

    /// Potential for the boundary current `j`, which must have zero mean.
    pub fn solve(&self, j: &BoundaryFunction) -> Result<NodalField, FemError> {
        let mesh = self.mesh;
        if j.len() != mesh.boundary_len() {
            return Err(FemError::SizeMismatch {
                expected: mesh.boundary_len(),
                got: j.len(),
            });
        }
        let mean = j.integral();
        let scale: f64 = j.values.iter().zip(&j.weights).map(|(v, w)| (v * w).abs()).sum();
        if mean.abs() > MEAN_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(FemError::NonZeroMeanCurrent {
                mean: mean / j.perimeter(),
            });
        }
        let mut b = vec![0.0; mesh.node_count()];
        for ((&i, &v), &w) in mesh.boundary.iter().zip(&j.values).zip(&mesh.boundary_weights) {
            b[i] = w * v;
        }
        Ok(NodalField::new(self.solve_load(&b)?, FieldRole::Potential))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the forward problem once. Use [`NeumannSolver`] to reuse the
/// factorization across several currents.
pub fn solve_forward(
    mesh: &DiskMesh,
    sigma: &NodalField,
    j: &BoundaryFunction,
) -> Result<NodalField, FemError> {
    NeumannSolver::new(mesh, sigma)?.solve(j)
}

/// Boundary values of `u` in angle order with the arclength mean removed.
pub fn boundary_trace(mesh: &DiskMesh, u: &NodalField) -> BoundaryFunction {
    BoundaryFunction::new(
        mesh.boundary.iter().map(|&i| u.values[i]).collect(),
        mesh.boundary_weights.clone(),
    )
    .zero_mean()
}

/// `−∇ũ·∇u` per triangle, lumped to nodes.
///
/// The triangle value is spread over its vertices with weight `A_T / 3` and
/// divided by the lumped nodal area, so pairing the result with `δσ` under the
/// lumped mass gives the exact derivative of the discrete forward map.
pub fn adjoint_gradient_density(
    mesh: &DiskMesh,
    u: &NodalField,
    u_tilde: &NodalField,
) -> Result<NodalField, FemError> {
    u.check(mesh)?;
    u_tilde.check(mesh)?;
    let mut acc = vec![0.0; mesh.node_count()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let g = &mesh.basis_gradients[t];
        let (mut gu, mut gv) = ([0.0; 2], [0.0; 2]);
        for k in 0..3 {
            for d in 0..2 {
                gu[d] += u.values[tri[k]] * g[k][d];
                gv[d] += u_tilde.values[tri[k]] * g[k][d];
            }
        }
        let v = -(gu[0] * gv[0] + gu[1] * gv[1]) * mesh.areas[t] / 3.0;
        for &i in tri {
            acc[i] += v;
        }
    }
    for (a, l) in acc.iter_mut().zip(&mesh.lumped_areas) {
        *a /= l;
    }
    Ok(NodalField::new(acc, FieldRole::GradientDensity))
}

/// Factored `(K + M) v = M_L g` with `v = 0` on the boundary, where `K` and
/// `M` are the unit stiffness and consistent mass matrices and `M_L` the
/// lumped mass. The result is the H¹₀ Riesz representative of a gradient
/// density given in the lumped L² pairing.
#[derive(Debug, Clone)]
pub struct SobolevSmoother<'a> {
    mesh: &'a DiskMesh,
    factor: CholeskyFactor,
    is_boundary: Vec<bool>,
}

impl<'a> SobolevSmoother<'a> {
    pub fn new(mesh: &'a DiskMesh) -> Result<Self, FemError> {
        let mut a = envelope(mesh, false);
        add_stiffness(&mut a, mesh, |_| 1.0);
        add_mass(&mut a, mesh);
        let mut is_boundary = vec![false; mesh.node_count()];
        for &i in &mesh.boundary {
            is_boundary[i] = true;
            a.set_identity_row(i, 1.0);
        }
        Ok(Self {
            mesh,
            factor: a.cholesky()?,
            is_boundary,
        })
    }

    pub fn smooth(&self, g: &NodalField) -> Result<NodalField, FemError> {
        g.check(self.mesh)?;
        let rhs: Vec<f64> = g
            .values
            .iter()
            .zip(&self.mesh.lumped_areas)
            .zip(&self.is_boundary)
            .map(|((v, l), &b)| if b { 0.0 } else { v * l })
            .collect();
        let mut v = self.factor.solve(&rhs);
        for (x, &b) in v.iter_mut().zip(&self.is_boundary) {
            if b {
                *x = 0.0;
            }
        }
        Ok(NodalField::new(v, FieldRole::GradientDensity))
    }
}

/// Discrete H¹(Ω) inner product `xᵀ(K + M)y`.
#[derive(Debug, Clone)]
pub struct H1Form {
    a: SkylineMatrix,
}

impl H1Form {
    pub fn new(mesh: &DiskMesh) -> Self {
        let mut a = envelope(mesh, false);
        add_stiffness(&mut a, mesh, |_| 1.0);
        add_mass(&mut a, mesh);
        Self { a }
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(&self.a.matvec(x), y)
    }

    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.inner(x, x)
    }
}
