//! Quintic B-spline interpolation on a uniform grid, periodic or open,
//! with analytic derivatives. Grid units throughout: knots at the integers.

use crate::banded::BandedMatrix;

const DEGREE: usize = 5;
/// Cardinal quintic B-spline values at the five grid points in its support.
const NODE_STENCIL: [f64; 5] = [
    1.0 / 120.0,
    26.0 / 120.0,
    66.0 / 120.0,
    26.0 / 120.0,
    1.0 / 120.0,
];

/// Interpolating quintic spline through `n` uniformly spaced samples.
///
/// Periodic fits see the samples as one period of an n-periodic sequence;
/// open fits cover u ∈ [0, n−1] and determine the four surplus coefficients
/// with not-a-knot conditions (vanishing fifth-derivative jumps at the two
/// innermost knots of each end).
#[derive(Clone, Debug)]
pub(crate) struct SplineFit {
    coef: Vec<f64>,
    n: usize,
    periodic: bool,
}

impl SplineFit {
    pub fn periodic(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 8, "periodic quintic fit needs at least 8 samples");
        SplineFit { coef: solve_periodic(values), n, periodic: true }
    }

    pub fn open(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 8, "open quintic fit needs at least 8 samples");
        SplineFit { coef: solve_open(values), n, periodic: false }
    }

    /// m-th derivative with respect to u, for m ≤ 4.
    pub fn eval(&self, u: f64, m: usize) -> f64 {
        assert!(m <= 4, "quintic spline exposes four derivatives");
        let (span, w) = self.locate(u);
        let basis = basis_derivative(w, m);
        let mut acc = 0.0;
        for (r, b) in basis.iter().enumerate() {
            // left-index convention: span i uses coefficients i−5 .. i
            acc += b * self.coef_at(span + r);
        }
        acc
    }

    /// Split u into a knot span and the offset within it, clamping open
    /// fits to their domain and wrapping periodic ones.
    fn locate(&self, u: f64) -> (usize, f64) {
        if self.periodic {
            let p = self.n as f64;
            let wrapped = u.rem_euclid(p);
            let mut span = wrapped.floor() as usize;
            if span >= self.n {
                span = self.n - 1; // rem_euclid can round up to the period
            }
            (span, wrapped - span as f64)
        } else {
            let top = (self.n - 1) as f64;
            let clamped = u.clamp(0.0, top);
            let span = (clamped.floor() as usize).min(self.n - 2);
            (span, clamped - span as f64)
        }
    }

    fn coef_at(&self, k: usize) -> f64 {
        if self.periodic {
            self.coef[k % self.n]
        } else {
            self.coef[k]
        }
    }
}

/// Nonzero degree-p basis functions at w ∈ [0, 1] within a span, for the
/// uniform integer knot vector. Entry r belongs to the (span−p+r)-th one.
fn basis_all(w: f64, p: usize) -> [f64; DEGREE + 1] {
    let mut n = [0.0; DEGREE + 1];
    n[0] = 1.0;
    for j in 1..=p {
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / j as f64;
            n[r] = saved + (r as f64 + 1.0 - w) * temp;
            saved = (w + (j - r) as f64 - 1.0) * temp;
        }
        n[j] = saved;
    }
    n
}

/// m-th derivatives of the six quintic basis functions at w, via the
/// difference of lower-degree bases.
fn basis_derivative(w: f64, m: usize) -> [f64; DEGREE + 1] {
    if m == 0 {
        return basis_all(w, DEGREE);
    }
    let low = basis_all(w, DEGREE - m);
    // binomial coefficients of order m with alternating signs
    let mut binom = [0.0_f64; DEGREE + 1];
    binom[0] = 1.0;
    for j in 1..=m {
        for i in (1..=j).rev() {
            binom[i] += binom[i - 1];
        }
    }
    let mut out = [0.0; DEGREE + 1];
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..=m {
            // derivative of basis r picks up lower-degree basis r+i−m
            let idx = r + i;
            if idx >= m && idx - m <= DEGREE - m {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom[i] * low[idx - m];
            }
        }
        *o = acc;
    }
    out
}

/// Periodic interpolation coefficients: pentadiagonal circulant system,
/// solved as banded LU plus a rank-4 corner correction.
fn solve_periodic(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut band = BandedMatrix::new(n, 2, 2);
    for i in 0..n {
        for (o, s) in NODE_STENCIL.iter().enumerate() {
            let j = i as isize + o as isize - 2;
            if (0..n as isize).contains(&j) {
                band.set(i, j as usize, *s);
            }
        }
    }
    let lu = band.factor().expect("interpolation matrix is nonsingular");

    // corner entries folded out of the band: rows 0,1 and n−2,n−1
    let mut z = values.to_vec();
    lu.solve(&mut z);
    let corners = [0, 1, n - 2, n - 1];
    let mut zu = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for (col, &row) in corners.iter().enumerate() {
        zu[col][row] = 1.0;
        lu.solve(&mut zu[col]);
    }
    let vt = |x: &[f64]| -> [f64; 4] {
        [
            (x[n - 2] + 26.0 * x[n - 1]) / 120.0,
            x[n - 1] / 120.0,
            x[0] / 120.0,
            (26.0 * x[0] + x[1]) / 120.0,
        ]
    };
    let mut small = [[0.0; 4]; 4];
    for (col, zc) in zu.iter().enumerate() {
        let v = vt(zc);
        for row in 0..4 {
            small[row][col] = v[row] + if row == col { 1.0 } else { 0.0 };
        }
    }
    let w = solve4(small, vt(&z));
    let mut x = z;
    for (col, zc) in zu.iter().enumerate() {
        for (xi, zi) in x.iter_mut().zip(zc) {
            *xi -= w[col] * zi;
        }
    }
    // shift from stencil-centered unknowns to left-index storage: node i
    // couples to left-index coefficients i−5..i−1, centered x_{i−2..i+2},
    // and evaluation reads storage slot k as left-index k−5
    let mut coef = vec![0.0; n];
    for (i, c) in coef.iter_mut().enumerate() {
        *c = x[(i + n - 2) % n];
    }
    coef
}

/// Open interpolation coefficients with not-a-knot end conditions.
fn solve_open(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let size = n + 4;
    let mut band = BandedMatrix::new(size, 6, 6);
    let mut rhs = vec![0.0; size];
    // fifth-derivative jump at knot m: six-fold alternating binomial over
    // coefficients q_{m−1} .. q_{m+5}
    let jump = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
    let nak = |band: &mut BandedMatrix, row: usize, m: usize| {
        for (o, j) in jump.iter().enumerate() {
            band.set(row, m - 1 + o, *j);
        }
    };
    nak(&mut band, 0, 1);
    nak(&mut band, 1, 2);
    for (t, v) in values.iter().enumerate() {
        for (o, s) in NODE_STENCIL.iter().enumerate() {
            band.set(t + 2, t + o, *s);
        }
        rhs[t + 2] = *v;
    }
    nak(&mut band, n + 2, n - 3);
    nak(&mut band, n + 3, n - 2);
    let lu = band.factor().expect("interpolation matrix is nonsingular");
    lu.solve(&mut rhs);
    rhs
}

/// Dense 4×4 solve with partial pivoting for the corner correction.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    for j in 0..4 {
        let p = (j..4).max_by(|&r, &s| a[r][j].abs().total_cmp(&a[s][j].abs())).unwrap();
        a.swap(j, p);
        b.swap(j, p);
        for i in j + 1..4 {
            let f = a[i][j] / a[j][j];
            for c in j..4 {
                a[i][c] -= f * a[j][c];
            }
            b[i] -= f * b[j];
        }
    }
    for j in (0..4).rev() {
        b[j] /= a[j][j];
        for i in 0..j {
            b[i] -= a[i][j] * b[j];
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basis_partitions_unity() {
        for &w in &[0.0, 0.25, 0.5, 0.99, 1.0] {
            let n = basis_all(w, DEGREE);
            assert_relative_eq!(n.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
            assert!(n.iter().all(|&v| v >= 0.0));
        }
        let at_node = basis_all(0.0, DEGREE);
        for (got, want) in at_node.iter().zip(NODE_STENCIL) {
            assert_relative_eq!(got, &want, epsilon = 1e-15);
        }
    }

    #[test]
    fn basis_derivatives_match_differences() {
        let h = 1e-6;
        for &w in &[0.2, 0.5, 0.83] {
            for m in 1..=4 {
                let up = basis_derivative(w + h, m - 1);
                let down = basis_derivative(w - h, m - 1);
                let got = basis_derivative(w, m);
                for r in 0..=DEGREE {
                    let fd = (up[r] - down[r]) / (2.0 * h);
                    assert_relative_eq!(got[r], fd, epsilon = 1e-4, max_relative = 1e-4);
                }
            }
        }
    }

    #[test]
    fn open_fit_reproduces_quintic_polynomials() {
        // a quintic has no active interior knots, so with not-a-knot ends
        // the interpolant must coincide with it everywhere
        let p = |u: f64| 0.3 + u * (1.7 + u * (-0.9 + u * (0.21 + u * (-0.017 + 0.0004 * u))));
        let n = 16;
        let values: Vec<f64> = (0..n).map(|i| p(i as f64)).collect();
        let fit = SplineFit::open(&values);
        for &u in &[0.0, 0.37, 4.99, 7.5, 11.03, 15.0] {
            assert_relative_eq!(fit.eval(u, 0), p(u), max_relative = 1e-11, epsilon = 1e-11);
        }
        // derivatives of the polynomial follow too
        let dp = |u: f64| 1.7 + u * (-1.8 + u * (0.63 + u * (-0.068 + 0.002 * u)));
        for &u in &[0.4, 7.5, 14.6] {
            assert_relative_eq!(fit.eval(u, 1), dp(u), max_relative = 1e-9, epsilon = 1e-9);
        }
    }

    #[test]
    fn periodic_fit_interpolates_and_wraps() {
        let n = 64;
        let f = |u: f64| (2.0 * std::f64::consts::PI * u / n as f64).sin();
        let values: Vec<f64> = (0..n).map(|i| f(i as f64)).collect();
        let fit = SplineFit::periodic(&values);
        for (i, v) in values.iter().enumerate() {
            assert_relative_eq!(fit.eval(i as f64, 0), v, epsilon = 1e-13);
        }
        // period wrap, including derivatives at the seam
        for m in 0..=4 {
            assert_relative_eq!(
                fit.eval(0.0, m),
                fit.eval(n as f64, m),
                epsilon = 1e-10,
                max_relative = 1e-10
            );
        }
        // off-grid accuracy is sixth order; at n = 64 that is well below 1e-7
        for &u in &[0.5, 17.25, 63.9] {
            assert_relative_eq!(fit.eval(u, 0), f(u), epsilon = 1e-7);
        }
    }

    #[test]
    fn periodic_derivatives_track_analytic() {
        let n = 256;
        let omega = 2.0 * std::f64::consts::PI / n as f64;
        let values: Vec<f64> = (0..n).map(|i| (omega * i as f64).cos()).collect();
        let fit = SplineFit::periodic(&values);
        for &u in &[3.1, 100.0, 200.7] {
            let want = -omega * (omega * u).sin();
            assert_relative_eq!(fit.eval(u, 1), want, epsilon = 1e-10);
            let want2 = -omega * omega * (omega * u).cos();
            assert_relative_eq!(fit.eval(u, 2), want2, epsilon = 1e-10);
        }
    }
}
