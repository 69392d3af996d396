use super::PeriodicDensity;

/// Piecewise-linear cumulative distribution of the staggered piecewise-constant
/// extension `f_h` of a [`PeriodicDensity`].
///
/// Sample `f_i` is the value of `f_h` on the cell `[(i − ½)h, (i + ½)h)`, so the
/// cell holding `f_0` straddles the origin and `F(0) = 0`. The table is exposed
/// over the extended interval `[−1, 2]` through integer cell indices
/// `k = 0..=3N`: cell `k` carries slope `f_{k mod N}` and spans
/// `[x_k, x_{k+1})` with `x_0 = −1`, `x_k = (2(k − N) − 1)h / 2` for
/// `1 ≤ k ≤ 3N` and `x_{3N+1} = 2`. Only one period is stored; the lifted
/// values follow from `F(t + 1) = F(t) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    h: f64,
    /// Slopes `f_0 .. f_{N−1}`.
    slopes: Vec<f64>,
    /// `F((j − ½)h)` for `j = 1..=N`, stored at `j − 1`.
    cum: Vec<f64>,
}

/// Builds the cumulative table of a density.
pub fn build_cdf(density: &PeriodicDensity) -> CdfTable {
    CdfTable::new(density)
}

impl CdfTable {
    pub fn new(density: &PeriodicDensity) -> Self {
        let slopes = density.values().to_vec();
        let n = slopes.len();
        let h = 1.0 / n as f64;
        let mut cum = Vec::with_capacity(n);
        let mut acc = 0.5 * h * slopes[0];
        cum.push(acc);
        for &s in &slopes[1..] {
            acc += h * s;
            cum.push(acc);
        }
        Self { h, slopes, cum }
    }

    /// Number of samples per period.
    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Index of the last cell of the extended table.
    pub fn last_cell(&self) -> usize {
        3 * self.len()
    }

    /// Slope of extended cell `k`.
    #[inline]
    pub fn slope(&self, k: usize) -> f64 {
        self.slopes[k % self.len()]
    }

    /// Left breakpoint `x_k` of extended cell `k` (`k = 3N + 1` gives 2).
    #[inline]
    pub fn breakpoint(&self, k: usize) -> f64 {
        let n = self.len();
        if k == 0 {
            -1.0
        } else if k > 3 * n {
            2.0
        } else {
            let q = k - 1;
            let (p, r) = (q / n, q % n);
            (p as f64 - 1.0) + (r as f64 + 0.5) * self.h
        }
    }

    /// Cumulative value `F(x_k)`.
    #[inline]
    pub fn cum(&self, k: usize) -> f64 {
        let n = self.len();
        if k == 0 {
            -1.0
        } else if k > 3 * n {
            2.0
        } else {
            let q = k - 1;
            let (p, r) = (q / n, q % n);
            (p as f64 - 1.0) + self.cum[r]
        }
    }

    /// Extended cell whose cumulative range `[F(x_k), F(x_{k+1}))` holds `y`,
    /// for `y ∈ [−1, 2)`.
    pub fn cell_of_mass(&self, y: f64) -> usize {
        // partition_point over k = 1..=3N+1 of cum(k) <= y
        let (mut lo, mut hi) = (1usize, 3 * self.len() + 2);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cum(mid) <= y {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (lo - 1).min(self.last_cell())
    }

    /// `F(t)` for any real `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let p = t.floor();
        let r = t - p;
        let n = self.len();
        let j = ((r / self.h + 0.5).floor() as usize).min(n);
        let v = if j == 0 {
            self.slopes[0] * r
        } else {
            let x = (j as f64 - 0.5) * self.h;
            self.cum[j - 1] + self.slopes[j % n] * (r - x)
        };
        p + v
    }

    /// `F⁻¹(y)` for any real `y`.
    pub fn inverse(&self, y: f64) -> f64 {
        let p = y.floor();
        let s = y - p;
        let n = self.len();
        let j = self.cum.partition_point(|&c| c <= s);
        let r = if j == 0 {
            s / self.slopes[0]
        } else {
            let x = (j as f64 - 0.5) * self.h;
            x + (s - self.cum[j - 1]) / self.slopes[j % n]
        };
        p + r
    }
}
