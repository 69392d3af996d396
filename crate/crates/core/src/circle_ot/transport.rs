use super::merge::sweep;
use super::{build_cdf, eval_i_derivatives, AlphaSolution, CdfTable, OtError, PeriodicDensity};

/// Largest `|I′(α*)|` accepted when pairing a solution with densities.
const STATIONARITY_TOL: f64 = 1e-6;

/// Optimal map `T(t) = G⁻¹(F(t) − α*)` on the lifted line.
///
/// `T` is nondecreasing and satisfies `T(t + 1) = T(t) + 1`.
#[derive(Debug, Clone)]
pub struct TransportMap {
    source: CdfTable,
    target: CdfTable,
    alpha_star: f64,
}

impl TransportMap {
    pub fn eval(&self, t: f64) -> f64 {
        self.target.inverse(self.source.eval(t) - self.alpha_star)
    }

    pub fn alpha_star(&self) -> f64 {
        self.alpha_star
    }

    pub fn source(&self) -> &CdfTable {
        &self.source
    }

    pub fn target(&self) -> &CdfTable {
        &self.target
    }

    /// Signed displacement `T(t) − t` at the sample nodes `i / N`.
    pub fn displacements(&self) -> Vec<f64> {
        let n = self.source.len();
        (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                self.eval(t) - t
            })
            .collect()
    }
}

fn check_pair(
    f: &PeriodicDensity,
    g: &PeriodicDensity,
    sol: &AlphaSolution,
) -> Result<(CdfTable, CdfTable), OtError> {
    if f.len() != g.len() {
        return Err(OtError::SizeMismatch(f.len(), g.len()));
    }
    let (ft, gt) = (build_cdf(f), build_cdf(g));
    let d = eval_i_derivatives(&ft, &gt, sol.alpha_star)?;
    let scale = 1.0 + d.second;
    if d.first.abs() > STATIONARITY_TOL * scale {
        return Err(OtError::MismatchedSolution {
            residual: d.first.abs(),
        });
    }
    Ok((ft, gt))
}

/// Optimal map from `f` to `g` for a solution previously computed for the pair.
pub fn optimal_map(
    f: &PeriodicDensity,
    g: &PeriodicDensity,
    sol: &AlphaSolution,
) -> Result<TransportMap, OtError> {
    let (source, target) = check_pair(f, g, sol)?;
    Ok(TransportMap {
        source,
        target,
        alpha_star: sol.alpha_star,
    })
}

/// Kantorovich potential on the sample cells, normalised to zero mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    /// `φ_i`, the average of the potential over cell `i`.
    pub values: Vec<f64>,
    /// Constant added to make `Σ φ_i h = 0`.
    pub constant: f64,
}

impl PotentialGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ φ_i δf_i h`, the first variation of W₂² along `δf`.
    pub fn pair(&self, delta: &[f64]) -> f64 {
        let h = 1.0 / self.values.len() as f64;
        self.values.iter().zip(delta).map(|(p, d)| p * d).sum::<f64>() * h
    }
}

/// Kantorovich potential `φ(t) = 2∫₀ᵗ (τ − T(τ)) dτ + c`, the first variation
/// of `W₂²(·, g)` at `f`.
///
/// The displacement `τ − T(τ)` is piecewise linear, so `φ` is integrated
/// exactly over each sample cell `[(i − ½)h, (i + ½)h)`; cell averages are
/// returned, which makes `Σ φ_i δf_i h` the exact derivative of the
/// discrete W₂² for mass-preserving perturbations `δf`.
pub fn kantorovich_potential(
    f: &PeriodicDensity,
    g: &PeriodicDensity,
    sol: &AlphaSolution,
) -> Result<PotentialGrid, OtError> {
    let (ft, gt) = check_pair(f, g, sol)?;
    let n = f.len();
    let h = 1.0 / n as f64;
    let mut cell_integral = vec![0.0; n];
    let mut phi = 0.0;
    sweep(&ft, &gt, -sol.alpha_star, |seg| {
        let len = seg.y1 - seg.y0;
        let d0 = seg.y0 - seg.c0;
        let d1 = seg.y1 - seg.c1;
        cell_integral[seg.src_cell % n] += len * phi + len * len * (2.0 * d0 + d1) / 3.0;
        phi += len * (d0 + d1);
    })?;
    let mut values: Vec<f64> = cell_integral.into_iter().map(|v| v / h).collect();
    let constant = -values.iter().sum::<f64>() / n as f64;
    for v in values.iter_mut() {
        *v += constant;
    }
    Ok(PotentialGrid { values, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_ot::w2_circle;
    use std::f64::consts::PI;

    #[test]
    fn identity_map_for_equal_densities() {
        let f = PeriodicDensity::from_fn(64, |t| 1.0 + 0.4 * (2.0 * PI * t).cos()).unwrap();
        let sol = w2_circle(&f, &f, 1e-12).unwrap();
        let map = optimal_map(&f, &f, &sol).unwrap();
        for d in map.displacements() {
            assert!(d.abs() < 1e-12);
        }
        let phi = kantorovich_potential(&f, &f, &sol).unwrap();
        assert!(phi.values.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn uniform_pair_gives_identity_and_zero_potential() {
        let u = PeriodicDensity::uniform(16);
        let sol = w2_circle(&u, &u, 1e-12).unwrap();
        let map = optimal_map(&u, &u, &sol).unwrap();
        for &t in &[0.0, 0.13, 0.5, 0.77] {
            assert!((map.eval(t) - t).abs() < 1e-14);
        }
        let phi = kantorovich_potential(&u, &u, &sol).unwrap();
        assert!(phi.values.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn map_is_monotone_and_equivariant() {
        let f = PeriodicDensity::from_fn(256, |_| 1.0).unwrap();
        let g = PeriodicDensity::from_fn(256, |t| 1.0 + 0.5 * (2.0 * PI * t).sin()).unwrap();
        let sol = w2_circle(&f, &g, 1e-12).unwrap();
        let map = optimal_map(&f, &g, &sol).unwrap();
        let mut prev = map.eval(0.0);
        for i in 1..=500 {
            let t = i as f64 / 500.0;
            let v = map.eval(t);
            assert!(v >= prev - 1e-14);
            assert!((map.eval(t + 1.0) - v - 1.0).abs() < 1e-12);
            prev = v;
        }
    }

    #[test]
    fn potential_has_zero_mean() {
        let f = PeriodicDensity::from_fn(300, |t| 1.0 + 0.5 * (2.0 * PI * t).sin()).unwrap();
        let g = PeriodicDensity::from_fn(300, |t| 2.0 + (6.0 * PI * t).cos()).unwrap();
        let sol = w2_circle(&f, &g, 1e-12).unwrap();
        let phi = kantorovich_potential(&f, &g, &sol).unwrap();
        let mean: f64 = phi.values.iter().sum::<f64>() / 300.0;
        assert!(mean.abs() < 1e-10);
    }

    #[test]
    fn mismatched_solution_is_rejected() {
        let f = PeriodicDensity::from_fn(64, |t| 1.0 + 0.5 * (2.0 * PI * t).sin()).unwrap();
        let g = PeriodicDensity::uniform(64);
        let mut sol = w2_circle(&f, &g, 1e-12).unwrap();
        sol.alpha_star += 0.2;
        assert!(matches!(
            optimal_map(&f, &g, &sol),
            Err(OtError::MismatchedSolution { .. })
        ));
        let other = PeriodicDensity::uniform(32);
        assert!(matches!(
            kantorovich_potential(&f, &other, &sol),
            Err(OtError::SizeMismatch(64, 32))
        ));
    }
}
