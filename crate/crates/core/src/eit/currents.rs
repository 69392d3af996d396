use crate::fem_disk::{BoundaryFunction, DiskMesh};

/// Current patterns `sin nθ, cos nθ` for `n = 1..=n_max`, in that order.
#[derive(Debug, Clone)]
pub struct CurrentBasis {
    pub patterns: Vec<BoundaryFunction>,
    pub labels: Vec<String>,
}

impl CurrentBasis {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.patterns.len() / 2
    }
}

pub fn make_currents(mesh: &DiskMesh, n_max: usize) -> CurrentBasis {
    assert!(n_max >= 1, "need at least one frequency");
    let mut patterns = Vec::with_capacity(2 * n_max);
    let mut labels = Vec::with_capacity(2 * n_max);
    for n in 1..=n_max {
        let k = n as f64;
        patterns.push(BoundaryFunction::from_angle_fn(mesh, |t| (k * t).sin()).zero_mean());
        labels.push(format!("sin{n}"));
        patterns.push(BoundaryFunction::from_angle_fn(mesh, |t| (k * t).cos()).zero_mean());
        labels.push(format!("cos{n}"));
    }
    CurrentBasis { patterns, labels }
}
