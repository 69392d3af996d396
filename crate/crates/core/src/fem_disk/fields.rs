use super::{DiskMesh, FemError};

/// What a nodal coefficient vector represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRole {
    Conductivity,
    Potential,
    GradientDensity,
}

/// P1 coefficients, one per mesh node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    pub values: Vec<f64>,
    pub role: FieldRole,
}

impl NodalField {
    pub fn new(values: Vec<f64>, role: FieldRole) -> Self {
        Self { values, role }
    }

    pub fn constant(mesh: &DiskMesh, value: f64, role: FieldRole) -> Self {
        Self::new(vec![value; mesh.node_count()], role)
    }

    /// Nodal interpolant of `f(x, y)`.
    pub fn from_fn(mesh: &DiskMesh, role: FieldRole, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::new(mesh.nodes.iter().map(|&[x, y]| f(x, y)).collect(), role)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check(&self, mesh: &DiskMesh) -> Result<(), FemError> {
        self.check_len(mesh.node_count())
    }

    pub fn check_len(&self, expected: usize) -> Result<(), FemError> {
        if self.len() != expected {
            return Err(FemError::SizeMismatch {
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }

    /// True when every value lies in `[lo, hi]`.
    pub fn is_admissible(&self, lo: f64, hi: f64) -> bool {
        self.values.iter().all(|&v| (lo..=hi).contains(&v))
    }
}

/// Values on the ordered boundary nodes together with the lumped arclength
/// weights used for boundary integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl BoundaryFunction {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(values.len(), weights.len());
        Self { values, weights }
    }

    /// Samples `f(θ)` at the boundary node angles.
    pub fn from_angle_fn(mesh: &DiskMesh, f: impl Fn(f64) -> f64) -> Self {
        Self::new(
            mesh.boundary_angles.iter().map(|&t| f(t)).collect(),
            mesh.boundary_weights.clone(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∮ v ds`.
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.integral() / self.perimeter()
    }

    /// Copy with the arclength mean removed.
    pub fn zero_mean(&self) -> Self {
        let m = self.mean();
        Self::new(self.values.iter().map(|v| v - m).collect(), self.weights.clone())
    }

    /// `∮ u v ds`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b * w)
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
