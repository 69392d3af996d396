use super::{EitError, InversionConfig, Misfit};
use crate::circle_ot::{kantorovich_potential, w2_circle, OtError, PeriodicDensity};
use crate::fem_disk::BoundaryFunction;

/// `ℒ(φ) = φ/a + 1` on the grid `t = θ/2π`, after removing the arclength mean
/// of `φ`.
pub fn normalize_trace(phi: &BoundaryFunction, a: f64) -> Result<PeriodicDensity, EitError> {
    let shifted = phi.zero_mean();
    let values: Vec<f64> = shifted.values.iter().map(|v| v / a + 1.0).collect();
    PeriodicDensity::new(values).map_err(|e| match e {
        OtError::NonPositive { value, .. } | OtError::BelowFloor { value, .. } => {
            EitError::Normalization { min: value, a }
        }
        other => EitError::Transport(other),
    })
}

/// Misfit between a computed trace `u` and a measurement `phi`, with its
/// gradient with respect to `u` in the boundary L² pairing.
///
/// The W₂ branch transports the normalised traces on the grid `t = θ/2π` and
/// reports the distance on a circle of length `cfg.w2_length`.
///
/// The gradient has zero arclength mean, so it is a valid Neumann current for
/// the adjoint solve.
pub fn misfit_and_boundary_gradient(
    u: &BoundaryFunction,
    phi: &BoundaryFunction,
    cfg: &InversionConfig,
) -> Result<(f64, BoundaryFunction), EitError> {
    if u.len() != phi.len() {
        return Err(EitError::SizeMismatch {
            expected: u.len(),
            got: phi.len(),
        });
    }
    match cfg.misfit {
        Misfit::L2 => {
            let (u0, p0) = (u.zero_mean(), phi.zero_mean());
            let d = BoundaryFunction::new(
                u0.values.iter().zip(&p0.values).map(|(a, b)| a - b).collect(),
                u.weights.clone(),
            );
            Ok((0.5 * d.inner(&d), d.zero_mean()))
        }
        Misfit::W2 => {
            let fu = normalize_trace(u, cfg.a)?;
            let fp = normalize_trace(phi, cfg.a)?;
            let sol = w2_circle(&fu, &fp, cfg.ot_eps)?;
            let pot = kantorovich_potential(&fu, &fp, &sol)?;
            // W₂² on a circle of length L is L² times its unit-period value.
            // dW/du_i = L² φ_i h / a; divide by the arclength weight for the L² pairing
            let l2 = cfg.w2_length * cfg.w2_length;
            let scale = l2 / (cfg.a * u.len() as f64);
            let grad = BoundaryFunction::new(
                pot.values.iter().zip(&u.weights).map(|(p, w)| p * scale / w).collect(),
                u.weights.clone(),
            );
            Ok((l2 * sol.w2_squared, grad.zero_mean()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem_disk::generate_disk_mesh;
    use std::f64::consts::PI;

    #[test]
    fn normalisation_of_simple_traces() {
        let m = generate_disk_mesh(3);
        let zero = BoundaryFunction::from_angle_fn(&m, |_| 0.0);
        assert!(normalize_trace(&zero, 2.0).unwrap().values().iter().all(|&v| v == 1.0));
        let c = BoundaryFunction::from_angle_fn(&m, |t| 0.5 * t.cos());
        let d = normalize_trace(&c, 2.0).unwrap();
        let n = d.len();
        for (i, v) in d.values().iter().enumerate() {
            let expect = 1.0 + 0.25 * (2.0 * PI * i as f64 / n as f64).cos();
            assert!((v - expect).abs() < 1e-12);
        }
        let big = BoundaryFunction::from_angle_fn(&m, |t| 5.0 * t.cos());
        assert!(matches!(normalize_trace(&big, 2.0), Err(EitError::Normalization { .. })));
    }

    #[test]
    fn identical_traces_give_zero() {
        let m = generate_disk_mesh(2);
        let phi = BoundaryFunction::from_angle_fn(&m, |t| 0.3 * (2.0 * t).sin());
        for misfit in [Misfit::W2, Misfit::L2] {
            let cfg = InversionConfig {
                misfit,
                ..Default::default()
            };
            let (v, g) = misfit_and_boundary_gradient(&phi, &phi, &cfg).unwrap();
            assert!(v.abs() < 1e-20);
            assert!(g.values.iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn l2_misfit_of_cosine_offset() {
        let m = generate_disk_mesh(3);
        let phi = BoundaryFunction::from_angle_fn(&m, |t| 0.3 * (2.0 * t).sin());
        let u = BoundaryFunction::from_angle_fn(&m, |t| 0.3 * (2.0 * t).sin() + t.cos());
        let cfg = InversionConfig {
            misfit: Misfit::L2,
            ..Default::default()
        };
        let (v, g) = misfit_and_boundary_gradient(&u, &phi, &cfg).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-2);
        for (gi, t) in g.values.iter().zip(&m.boundary_angles) {
            assert!((gi - t.cos()).abs() < 1e-12);
        }
    }
}
