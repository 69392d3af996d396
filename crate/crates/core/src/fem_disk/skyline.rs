use super::FemError;

/// Symmetric matrix in variable-band (skyline) storage: row `i` keeps the
/// lower-triangle entries from column `first[i]` to the diagonal. A Cholesky
/// factorization fills only inside this envelope.
#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    first: Vec<usize>,
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineMatrix {
    /// Builds an empty matrix whose envelope covers every `(i, j)` pair in
    /// `pattern` (either order).
    pub fn with_pattern(n: usize, pattern: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut first: Vec<usize> = (0..n).collect();
        for (i, j) in pattern {
            let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
            first[hi] = first[hi].min(lo);
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for (i, &f) in first.iter().enumerate() {
            offset.push(acc);
            acc += i - f + 1;
        }
        offset.push(acc);
        Self {
            first,
            offset,
            data: vec![0.0; acc],
        }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries, a proxy for factorization memory.
    pub fn stored(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && j >= self.first[i], "({i}, {j}) outside envelope");
        self.offset[i] + (j - self.first[i])
    }

    /// Adds `v` to entries `(i, j)` and `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let k = self.index(hi, lo);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if lo < self.first[hi] {
            0.0
        } else {
            self.data[self.index(hi, lo)]
        }
    }

    /// Zeroes row and column `i` and puts `diag` on the diagonal.
    pub fn set_identity_row(&mut self, i: usize, diag: f64) {
        let n = self.dim();
        for j in self.first[i]..i {
            let k = self.index(i, j);
            self.data[k] = 0.0;
        }
        for r in i + 1..n {
            if self.first[r] <= i {
                let k = self.index(r, i);
                self.data[k] = 0.0;
            }
        }
        let k = self.index(i, i);
        self.data[k] = diag;
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.offset[i]..self.offset[i + 1]]
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let f = self.first[i];
            let row = self.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let mut acc = diag[0] * x[i];
            for (k, &a) in off.iter().enumerate() {
                let j = f + k;
                acc += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += acc;
        }
        y
    }

    /// In-place Cholesky `A = L Lᵀ`. Fails on the first pivot that is not
    /// safely positive, so singular or indefinite systems are reported.
    pub fn cholesky(mut self) -> Result<CholeskyFactor, FemError> {
        let n = self.dim();
        for i in 0..n {
            let fi = self.first[i];
            let oi = self.offset[i];
            for j in fi..i {
                let fj = self.first[j];
                let oj = self.offset[j];
                let start = fi.max(fj);
                let len = j - start;
                let (ri, rj) = (oi + (start - fi), oj + (start - fj));
                let dot: f64 = (0..len).map(|k| self.data[ri + k] * self.data[rj + k]).sum();
                let ljj = self.data[oj + (j - fj)];
                let k = oi + (j - fi);
                self.data[k] = (self.data[k] - dot) / ljj;
            }
            let kd = oi + (i - fi);
            let diag = self.data[kd];
            let sq: f64 = self.data[oi..kd].iter().map(|v| v * v).sum();
            let pivot = diag - sq;
            if !(pivot > 1e-13 * diag.abs()) || !pivot.is_finite() {
                return Err(FemError::NotPositiveDefinite { row: i, pivot });
            }
            self.data[kd] = pivot.sqrt();
        }
        Ok(CholeskyFactor { l: self })
    }
}

/// Lower-triangular Cholesky factor in the envelope of the original matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: SkylineMatrix,
}

impl CholeskyFactor {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let n = l.dim();
        let mut x = b.to_vec();
        for i in 0..n {
            let f = l.first[i];
            let row = l.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let dot: f64 = off.iter().zip(&x[f..i]).map(|(a, v)| a * v).sum();
            x[i] = (x[i] - dot) / diag[0];
        }
        for i in (0..n).rev() {
            let f = l.first[i];
            let row = l.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            x[i] /= diag[0];
            let xi = x[i];
            for (k, &a) in off.iter().enumerate() {
                x[f + k] -= a * xi;
            }
        }
        x
    }
}
