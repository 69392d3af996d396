use serde::{Deserialize, Serialize};

use super::merge::sweep;
use super::{build_cdf, CdfTable, OtError, PeriodicDensity};

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Half-width of the excluded margin at ±1 for the Newton bracket.
const BRACKET_MARGIN: f64 = 1e-9;

/// `I(α)` and its first two derivatives.
///
/// `I′(α) = 2∫₀¹ (F⁻¹(G(y) + α) − y) dy` and `I″(α) = 2∫₀¹ dy / f(F⁻¹(G(y) + α))`,
/// so `I′` is increasing and `I″ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IDerivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Minimiser of `I` and the resulting squared distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSolution {
    pub alpha_star: f64,
    pub w2_squared: f64,
    pub newton_iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Exact integrals of the piecewise-linear composite for the tables of `f`
/// and `g`. With `y` the source variable and `c(y) = F⁻¹(G(y) + α)`:
///
/// ```text
/// I   = ∫ (c − y)² g dy
/// I′  = 2 ∫ (c − y) dy
/// I″  = 2 ∫ dy / f(c)
/// ```
pub fn eval_i_derivatives(f: &CdfTable, g: &CdfTable, alpha: f64) -> Result<IDerivatives, OtError> {
    if f.len() != g.len() {
        return Err(OtError::SizeMismatch(f.len(), g.len()));
    }
    let (mut value, mut first, mut second) = (0.0, 0.0, 0.0);
    sweep(g, f, alpha, |seg| {
        let len = seg.y1 - seg.y0;
        let d0 = seg.c0 - seg.y0;
        let d1 = seg.c1 - seg.y1;
        value += seg.src_slope * len * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
        first += len * (d0 + d1);
        second += 2.0 * len / seg.dst_slope;
    })?;
    Ok(IDerivatives {
        value,
        first,
        second,
    })
}

/// Safeguarded Newton iteration for `I′(α) = 0` starting at α = 0.
///
/// A sign bracket `[lo, hi] ⊂ (−1, 1)` is maintained from the signs of `I′`;
/// any Newton step landing outside it is replaced by bisection.
pub fn solve_alpha(f: &CdfTable, g: &CdfTable, eps: f64) -> Result<AlphaSolution, OtError> {
    solve_alpha_with(
        f,
        g,
        NewtonOptions {
            eps,
            ..Default::default()
        },
    )
}

pub fn solve_alpha_with(
    f: &CdfTable,
    g: &CdfTable,
    opts: NewtonOptions,
) -> Result<AlphaSolution, OtError> {
    if !(opts.eps > 0.0) {
        return Err(OtError::BadTolerance(opts.eps));
    }
    let (mut lo, mut hi) = (-1.0 + BRACKET_MARGIN, 1.0 - BRACKET_MARGIN);
    let mut alpha = 0.0;
    for iter in 1..=opts.max_iter {
        let d = eval_i_derivatives(f, g, alpha)?;
        if d.first == 0.0 {
            return Ok(AlphaSolution {
                alpha_star: alpha,
                w2_squared: d.value.max(0.0),
                newton_iterations: iter - 1,
                residual: 0.0,
            });
        }
        if d.first > 0.0 {
            hi = alpha;
        } else {
            lo = alpha;
        }
        let mut next = alpha - d.first / d.second;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - alpha).abs();
        alpha = next;
        if step < opts.eps {
            let d = eval_i_derivatives(f, g, alpha)?;
            return Ok(AlphaSolution {
                alpha_star: alpha,
                w2_squared: d.value.max(0.0),
                newton_iterations: iter,
                residual: d.first.abs(),
            });
        }
    }
    Err(OtError::NoConvergence {
        iterations: opts.max_iter,
        last_alpha: alpha,
    })
}

/// Squared quadratic Wasserstein distance between two densities on the circle.
pub fn w2_circle(
    f: &PeriodicDensity,
    g: &PeriodicDensity,
    eps: f64,
) -> Result<AlphaSolution, OtError> {
    if f.len() != g.len() {
        return Err(OtError::SizeMismatch(f.len(), g.len()));
    }
    if !(eps > 0.0) {
        return Err(OtError::BadTolerance(eps));
    }
    // The sweep leaves roundoff of order 1e-34 for identical inputs.
    if f.values() == g.values() {
        return Ok(AlphaSolution {
            alpha_star: 0.0,
            w2_squared: 0.0,
            newton_iterations: 0,
            residual: 0.0,
        });
    }
    solve_alpha(&build_cdf(f), &build_cdf(g), eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn table(n: usize, f: impl Fn(f64) -> f64) -> CdfTable {
        build_cdf(&PeriodicDensity::from_fn(n, f).unwrap())
    }

    #[test]
    fn uniform_closed_form() {
        let u = table(4, |_| 1.0);
        for &a in &[-0.9, -0.3, 0.0, 0.45, 0.99] {
            let d = eval_i_derivatives(&u, &u, a).unwrap();
            assert!((d.value - a * a).abs() < 1e-14);
            assert!((d.first - 2.0 * a).abs() < 1e-14);
            assert!((d.second - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identical_densities_at_zero_shift() {
        let f = table(128, |t| 1.0 + 0.8 * (2.0 * PI * t).cos());
        let d = eval_i_derivatives(&f, &f, 0.0).unwrap();
        assert!(d.value.abs() < 1e-28);
        assert!(d.first.abs() < 1e-14);
        assert!(d.second > 0.0);
        let sol = solve_alpha(&f, &f, 1e-12).unwrap();
        assert!(sol.alpha_star.abs() < 1e-14);
        assert!(sol.w2_squared < 1e-28);
    }

    #[test]
    fn first_derivative_matches_finite_difference() {
        let f = table(4096, |t| 1.0 + 0.5 * (2.0 * PI * t).sin());
        let g = table(4096, |_| 1.0);
        let a = 0.1;
        let step = 1e-6;
        let d = eval_i_derivatives(&f, &g, a).unwrap();
        let ip = eval_i_derivatives(&f, &g, a + step).unwrap().value;
        let im = eval_i_derivatives(&f, &g, a - step).unwrap().value;
        let fd = (ip - im) / (2.0 * step);
        assert!(((d.first - fd) / fd).abs() < 1e-4, "{} vs {}", d.first, fd);
        let dp = eval_i_derivatives(&f, &g, a + step).unwrap().first;
        let dm = eval_i_derivatives(&f, &g, a - step).unwrap().first;
        let fd2 = (dp - dm) / (2.0 * step);
        assert!(((d.second - fd2) / fd2).abs() < 1e-4);
    }

    #[test]
    fn out_of_range_alpha_is_rejected() {
        let u = table(8, |_| 1.0);
        assert!(matches!(
            eval_i_derivatives(&u, &u, -1.0),
            Err(OtError::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_last_iterate() {
        let f = table(64, |t| 1.0 + 0.9 * (2.0 * PI * t).sin());
        let g = table(64, |_| 1.0);
        let err = solve_alpha_with(&f, &g, NewtonOptions { eps: 1e-12, max_iter: 1 }).unwrap_err();
        assert!(matches!(err, OtError::NoConvergence { iterations: 1, .. }));
        assert!(matches!(solve_alpha(&f, &g, 0.0), Err(OtError::BadTolerance(_))));
    }

    #[test]
    fn rotated_density_is_bounded_by_rotation_cost() {
        let f = PeriodicDensity::from_fn(1024, |t| 1.0 + 0.5 * (2.0 * PI * t).sin()).unwrap();
        let g = PeriodicDensity::from_fn(1024, |t| 1.0 + 0.5 * (2.0 * PI * (t - 0.1)).sin()).unwrap();
        let sol = w2_circle(&f, &g, 1e-12).unwrap();
        assert!(sol.w2_squared <= 0.01 + 1e-12);
        assert!(sol.w2_squared > 0.0);
    }
}
