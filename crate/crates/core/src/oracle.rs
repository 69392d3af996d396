//! Slow reference computations for validating [`crate::circle_ot`].
//!
//! Nothing here shares code with the merge-based solver: the cumulative
//! distribution is rebuilt from the samples, `I(α)` is integrated by the
//! periodic trapezoid rule on an oversampled grid, and the discrete matching
//! problem is solved by enumerating permutations.

use thiserror::Error;

use crate::circle_ot::PeriodicDensity;

/// Largest atom count accepted by [`brute_force_circle_w2`].
pub const MAX_ATOMS: usize = 8;

/// Oversampling factor of the trapezoid grid used by [`alpha_grid_search`].
pub const OVERSAMPLING: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("permutation oracle supports at most {MAX_ATOMS} atoms, got {0}")]
    TooManyAtoms(usize),
    #[error("need at least one atom")]
    NoAtoms,
    #[error("atom sets differ in size: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("grid search needs at least 1000 points, got {0}")]
    CoarseGrid(usize),
}

/// Cumulative distribution of the staggered piecewise-constant density on
/// one period, with knots at `(i − ½)/N` plus the period ends.
struct PeriodCdf {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl PeriodCdf {
    fn new(density: &PeriodicDensity) -> Self {
        let f = density.values();
        let n = f.len();
        let h = 1.0 / n as f64;
        let mut knots = vec![0.0];
        let mut values = vec![0.0];
        for (i, &fi) in f.iter().enumerate() {
            // edge between sample i and sample i + 1
            let x = (i as f64 + 0.5) * h;
            let prev_x = *knots.last().unwrap();
            let prev_v = *values.last().unwrap();
            knots.push(x);
            values.push(prev_v + fi * (x - prev_x));
        }
        knots.push(1.0);
        let tail = values.last().unwrap() + f[0] * (1.0 - (n as f64 - 0.5) * h);
        values.push(tail);
        // absorb rounding so the period carries exactly unit mass
        let total = *values.last().unwrap();
        for v in values.iter_mut() {
            *v /= total;
        }
        Self { knots, values }
    }

    /// Inverse on the whole line via `F⁻¹(y + 1) = F⁻¹(y) + 1`.
    fn inverse(&self, y: f64) -> f64 {
        let p = y.floor();
        let s = y - p;
        let j = self.values.partition_point(|&v| v <= s).clamp(1, self.values.len() - 1);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        let (x0, x1) = (self.knots[j - 1], self.knots[j]);
        p + x0 + (s - v0) * (x1 - x0) / (v1 - v0)
    }

    fn eval(&self, t: f64) -> f64 {
        let p = t.floor();
        let r = t - p;
        let j = self.knots.partition_point(|&x| x <= r).clamp(1, self.knots.len() - 1);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        let (x0, x1) = (self.knots[j - 1], self.knots[j]);
        p + v0 + (r - x0) * (v1 - v0) / (x1 - x0)
    }
}

/// Quadratic transport cost on the segment [0, 1] without wrap-around,
/// `∫₀¹ |F⁻¹(s) − G⁻¹(s)|² ds`.
///
/// Both inverses are affine between consecutive knots of the merged mass
/// grid, so Simpson's rule on each piece is exact.
pub fn w2_line(f: &PeriodicDensity, g: &PeriodicDensity) -> f64 {
    let (fc, gc) = (PeriodCdf::new(f), PeriodCdf::new(g));
    let mut masses: Vec<f64> = fc.values.iter().chain(&gc.values).copied().collect();
    masses.sort_by(|a, b| a.partial_cmp(b).unwrap());
    masses.dedup();
    let inv_gap = |s: f64| {
        let s = s.clamp(0.0, 1.0 - f64::EPSILON);
        fc.inverse(s) - gc.inverse(s)
    };
    masses
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (qa, qm, qb) = (inv_gap(a), inv_gap(0.5 * (a + b)), inv_gap(b));
            (b - a) / 6.0 * (qa * qa + 4.0 * qm * qm + qb * qb)
        })
        .sum()
}

/// `I(α)` by the periodic trapezoid rule on `OVERSAMPLING · N` points.
fn trapezoid_i(gc: &PeriodCdf, f_inv: &[f64], alpha: f64) -> f64 {
    let m = f_inv.len();
    let dt = 1.0 / m as f64;
    // Queries k·dt − α increase with k, so the knot index only moves forward
    // within one period and restarts when the period changes.
    let last = gc.values.len() - 1;
    let mut period = f64::NAN;
    let mut j = 1;
    f_inv
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let y = k as f64 * dt - alpha;
            let p = y.floor();
            if p != period {
                period = p;
                j = 1;
            }
            let s = y - p;
            while j < last && gc.values[j] <= s {
                j += 1;
            }
            let (v0, v1) = (gc.values[j - 1], gc.values[j]);
            let (x0, x1) = (gc.knots[j - 1], gc.knots[j]);
            let d = x - (p + x0 + (s - v0) * (x1 - x0) / (v1 - v0));
            d * d
        })
        .sum::<f64>()
        * dt
}

/// Grid minimiser of `I(α)` over `α_j = −1 + 2j / grid_points`,
/// `j = 1 .. grid_points − 1`.
///
/// A coarse exhaustive pass over every `grid_points / 200`-th node brackets the
/// minimum, a ternary search over integer indices narrows it, and a final
/// exhaustive scan of ±200 nodes around the result picks the grid minimiser.
pub fn alpha_grid_search(
    f: &PeriodicDensity,
    g: &PeriodicDensity,
    grid_points: usize,
) -> Result<(f64, f64), OracleError> {
    if grid_points < 1000 {
        return Err(OracleError::CoarseGrid(grid_points));
    }
    if f.len() != g.len() {
        return Err(OracleError::SizeMismatch(f.len(), g.len()));
    }
    let (fc, gc) = (PeriodCdf::new(f), PeriodCdf::new(g));
    let m = OVERSAMPLING * f.len();
    let f_inv: Vec<f64> = (0..m).map(|k| fc.inverse(k as f64 / m as f64)).collect();
    let alpha_of = |j: usize| -1.0 + 2.0 * j as f64 / grid_points as f64;
    let cost = |j: usize| trapezoid_i(&gc, &f_inv, alpha_of(j));
    let (first, last) = (1usize, grid_points - 1);

    let stride = (grid_points / 200).max(1);
    let coarse: Vec<usize> = (first..=last).step_by(stride).collect();
    let (best_coarse, _) = coarse
        .iter()
        .map(|&j| (j, cost(j)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let (mut lo, mut hi) = (
        best_coarse.saturating_sub(stride).max(first),
        (best_coarse + stride).min(last),
    );
    while hi - lo > 8 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if cost(m1) <= cost(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let centre = (lo + hi) / 2;
    let window = 200;
    let (j, w2sq) = (centre.saturating_sub(window).max(first)..=(centre + window).min(last))
        .map(|j| (j, cost(j)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    Ok((alpha_of(j), w2sq))
}

/// Equal-mass atoms at midpoint quantiles of two densities.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSamplePoints {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl DiscreteSamplePoints {
    pub fn new(mut xs: Vec<f64>, mut ys: Vec<f64>) -> Result<Self, OracleError> {
        if xs.len() != ys.len() {
            return Err(OracleError::SizeMismatch(xs.len(), ys.len()));
        }
        for v in xs.iter_mut().chain(ys.iter_mut()) {
            *v = v.rem_euclid(1.0);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { xs, ys })
    }

    /// `x_i = F⁻¹((i + ½)/n)`, `y_i = G⁻¹((i + ½)/n)`.
    pub fn quantiles(
        f: &PeriodicDensity,
        g: &PeriodicDensity,
        n: usize,
    ) -> Result<Self, OracleError> {
        let (fc, gc) = (PeriodCdf::new(f), PeriodCdf::new(g));
        let q = |c: &PeriodCdf| {
            (0..n)
                .map(|i| c.inverse((i as f64 + 0.5) / n as f64))
                .collect::<Vec<_>>()
        };
        Self::new(q(&fc), q(&gc))
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Geodesic distance on ℝ/ℤ.
pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    /// `Σᵢ d(xᵢ, y_{σ(i)})² / n` at the optimum.
    pub cost: f64,
    /// `permutation[i]` is the atom of `ys` matched to `xs[i]`.
    pub permutation: Vec<usize>,
    /// Cheapest cyclic shift `i ↦ i + s mod n` of the sorted matching.
    pub best_shift: usize,
    pub best_shift_cost: f64,
    /// The global optimum is attained by a cyclic shift (within 1e-12).
    pub cyclic_optimal: bool,
}

/// Exhaustive minimum over all `n!` matchings of the atoms.
pub fn brute_force_circle_w2(samples: &DiscreteSamplePoints) -> Result<MatchingResult, OracleError> {
    let n = samples.len();
    if n == 0 {
        return Err(OracleError::NoAtoms);
    }
    if n > MAX_ATOMS {
        return Err(OracleError::TooManyAtoms(n));
    }
    let cost_matrix: Vec<Vec<f64>> = samples
        .xs
        .iter()
        .map(|&x| {
            samples
                .ys
                .iter()
                .map(|&y| circle_distance(x, y).powi(2) / n as f64)
                .collect()
        })
        .collect();
    let total = |perm: &[usize]| perm.iter().enumerate().map(|(i, &j)| cost_matrix[i][j]).sum::<f64>();

    // Heap's algorithm
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (total(&perm), perm.clone());
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = total(&perm);
            if v < best.0 {
                best = (v, perm.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let (best_shift, best_shift_cost) = (0..n)
        .map(|s| {
            let shifted: Vec<usize> = (0..n).map(|i| (i + s) % n).collect();
            (s, total(&shifted))
        })
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    Ok(MatchingResult {
        cost: best.0,
        permutation: best.1,
        best_shift,
        best_shift_cost,
        cyclic_optimal: best_shift_cost <= best.0 + 1e-12,
    })
}

/// `F(t)` of the oracle's own cumulative table, exposed for pushforward checks.
pub fn cdf_at(density: &PeriodicDensity, t: f64) -> f64 {
    PeriodCdf::new(density).eval(t)
}
