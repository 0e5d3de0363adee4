//! Banded LU factorization with partial pivoting, enough to solve the
//! spline interpolation systems without pulling in a LAPACK binding.

/// Square banded matrix with `kl` subdiagonals and `ku` superdiagonals,
/// stored LAPACK-style with `kl` extra rows for pivoting fill.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage: entry (i, j) lives at row kl+ku+i−j, col j.
    ab: Vec<f64>,
}

pub struct BandedLu {
    mat: BandedMatrix,
    pivot: Vec<usize>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            ab: vec![0.0; (2 * kl + ku + 1) * n],
        }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.ku + self.kl >= j && j + self.kl >= i, "outside band");
        (self.kl + self.ku + i - j) * self.n + j
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let s = self.slot(i, j);
        self.ab[s] = value;
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.ab[self.slot(i, j)]
    }

    /// Factor in place; fails on an exactly singular pivot.
    pub fn factor(mut self) -> Option<BandedLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut pivot = vec![0; n];
        for j in 0..n {
            let i_end = (j + kl).min(n - 1);
            let mut i_max = j;
            let mut v_max = self.at(j, j).abs();
            for i in j + 1..=i_end {
                let v = self.at(i, j).abs();
                if v > v_max {
                    v_max = v;
                    i_max = i;
                }
            }
            if v_max == 0.0 {
                return None;
            }
            pivot[j] = i_max;
            let c_end = (j + kl + ku).min(n - 1);
            if i_max != j {
                for c in j..=c_end {
                    let (a, b) = (self.slot(j, c), self.slot(i_max, c));
                    self.ab.swap(a, b);
                }
            }
            let diag = self.at(j, j);
            for i in j + 1..=i_end {
                let m = self.at(i, j) / diag;
                self.set(i, j, m);
                for c in j + 1..=c_end {
                    let v = self.at(i, c) - m * self.at(j, c);
                    self.set(i, c, v);
                }
            }
        }
        Some(BandedLu { mat: self, pivot })
    }
}

impl BandedLu {
    pub fn solve(&self, b: &mut [f64]) {
        let (n, kl, ku) = (self.mat.n, self.mat.kl, self.mat.ku);
        assert_eq!(b.len(), n);
        for j in 0..n {
            b.swap(j, self.pivot[j]);
            let bj = b[j];
            for i in j + 1..=(j + kl).min(n - 1) {
                b[i] -= self.mat.at(i, j) * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.mat.at(j, j);
            let bj = b[j];
            let i_start = j.saturating_sub(kl + ku);
            for i in i_start..j {
                b[i] -= self.mat.at(i, j) * bj;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Dense Gaussian elimination with partial pivoting, as a reference.
    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut x = b.to_vec();
        for j in 0..n {
            let p = (j..n).max_by(|&r, &s| m[r][j].abs().total_cmp(&m[s][j].abs())).unwrap();
            m.swap(j, p);
            x.swap(j, p);
            for i in j + 1..n {
                let f = m[i][j] / m[j][j];
                for c in j..n {
                    m[i][c] -= f * m[j][c];
                }
                x[i] -= f * x[j];
            }
        }
        for j in (0..n).rev() {
            x[j] /= m[j][j];
            for i in 0..j {
                x[i] -= m[i][j] * x[j];
                m[i][j] = 0.0;
            }
        }
        x
    }

    #[test]
    fn matches_dense_solver() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &(n, kl, ku) in &[(9usize, 2usize, 2usize), (40, 3, 6), (25, 6, 6), (6, 1, 3)] {
            let mut band = BandedMatrix::new(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if i + ku >= j && j + kl >= i {
                        let v: f64 = rng.gen_range(-1.0..1.0);
                        // keep the diagonal away from zero without dominance
                        let v = if i == j { v + 3.0_f64.copysign(v) } else { v };
                        band.set(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = band.factor().expect("nonsingular");
            let mut x = rhs.clone();
            lu.solve(&mut x);
            let want = dense_solve(&dense, &rhs);
            for (got, want) in x.iter().zip(&want) {
                assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut band = BandedMatrix::new(3, 1, 1);
        band.set(0, 0, 1.0);
        band.set(0, 1, 2.0);
        // row 1 left all-zero
        band.set(2, 1, 1.0);
        band.set(2, 2, 1.0);
        assert!(band.factor().is_none());
    }
}
