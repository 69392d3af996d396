use super::OtError;

/// Lower bound on normalised density samples.
pub const DENSITY_FLOOR: f64 = 1e-6;

/// `N` uniform samples `f(i/N)` of a strictly positive density on [0, 1),
/// rescaled to unit mass `Σ f_i / N = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicDensity {
    values: Vec<f64>,
    mass: f64,
}

impl PeriodicDensity {
    /// Validates and normalises raw samples. Inputs are never clipped: any
    /// non-positive sample, or one that drops below [`DENSITY_FLOOR`] after
    /// normalisation, is rejected with its index.
    pub fn new(raw: Vec<f64>) -> Result<Self, OtError> {
        if raw.is_empty() {
            return Err(OtError::Empty);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(OtError::NonPositive { index, value });
            }
        }
        let n = raw.len() as f64;
        let mass = raw.iter().sum::<f64>() / n;
        let mut values = raw;
        for v in values.iter_mut() {
            *v /= mass;
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| **v < DENSITY_FLOOR)
        {
            return Err(OtError::BelowFloor {
                index,
                value,
                floor: DENSITY_FLOOR,
            });
        }
        Ok(Self { values, mass })
    }

    /// Samples `f` at `t_i = i / n`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, OtError> {
        let h = 1.0 / n as f64;
        Self::new((0..n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            values: vec![1.0; n],
            mass: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Normalised samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mass of the raw samples before rescaling (the `m` in `f_h = f / m`).
    pub fn raw_mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    /// Rectangle-rule L¹ distance between two densities on the same grid.
    pub fn l1_distance(&self, other: &Self) -> Result<f64, OtError> {
        if self.len() != other.len() {
            return Err(OtError::SizeMismatch(self.len(), other.len()));
        }
        let h = self.spacing();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_to_unit_mass() {
        let d = PeriodicDensity::new(vec![1.0, 3.0, 2.0, 6.0]).unwrap();
        let mass: f64 = d.values().iter().sum::<f64>() * d.spacing();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!((d.raw_mass() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_with_index() {
        let err = PeriodicDensity::new(vec![1.0, 0.5, -0.1, 2.0]).unwrap_err();
        assert_eq!(
            err,
            OtError::NonPositive {
                index: 2,
                value: -0.1
            }
        );
        assert!(matches!(
            PeriodicDensity::new(vec![1.0, f64::NAN]),
            Err(OtError::NonPositive { index: 1, .. })
        ));
        assert_eq!(PeriodicDensity::new(vec![]), Err(OtError::Empty));
    }

    #[test]
    fn rejects_below_floor_after_normalisation() {
        let err = PeriodicDensity::new(vec![1e-9, 1.0, 1.0]).unwrap_err();
        assert!(matches!(err, OtError::BelowFloor { index: 0, .. }));
    }
}
