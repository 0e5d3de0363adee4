//! Truncated Taylor-series arithmetic, used to sample curve generators with
//! exact derivatives instead of differentiating discrete data.

use std::ops::{Add, Mul, Neg, Sub};

/// Taylor expansion of a scalar function about a point, truncated to `N`
/// coefficients: `c[i]` holds the i-th derivative divided by i!.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    pub c: [f64; N],
}

impl<const N: usize> Jet<N> {
    /// Constant function.
    pub fn con(value: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = value;
        Jet { c }
    }

    /// The expansion variable itself, centered at `value`.
    pub fn var(value: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = value;
        if N > 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    /// Function value at the expansion point.
    pub fn value(self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(self, k: usize) -> f64 {
        let mut factorial = 1.0;
        for i in 2..=k {
            factorial *= i as f64;
        }
        self.c[k] * factorial
    }

    pub fn scale(self, factor: f64) -> Self {
        let mut c = self.c;
        for ci in &mut c {
            *ci *= factor;
        }
        Jet { c }
    }

    /// Quotient via the recurrence q_k = (a_k − Σ_{i<k} q_i b_{k−i}) / b_0.
    pub fn div(self, rhs: Self) -> Self {
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.c[k];
            for i in 0..k {
                acc -= q[i] * rhs.c[k - i];
            }
            q[k] = acc / rhs.c[0];
        }
        Jet { c: q }
    }

    /// Square root via r_k = (a_k − Σ_{0<i<k} r_i r_{k−i}) / (2 r_0).
    pub fn sqrt(self) -> Self {
        let mut r = [0.0; N];
        r[0] = self.c[0].sqrt();
        for k in 1..N {
            let mut acc = self.c[k];
            for i in 1..k {
                acc -= r[i] * r[k - i];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Jet { c: r }
    }

    /// Sine and cosine together; their coefficient recurrences are coupled.
    pub fn sin_cos(self) -> (Self, Self) {
        let mut s = [0.0; N];
        let mut c = [0.0; N];
        let (s0, c0) = self.c[0].sin_cos();
        s[0] = s0;
        c[0] = c0;
        for k in 1..N {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let jf = j as f64 * self.c[j];
                sa += jf * c[k - j];
                ca -= jf * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (ci, ri) in c.iter_mut().zip(rhs.c) {
            *ci += ri;
        }
        Jet { c }
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (ci, ri) in c.iter_mut().zip(rhs.c) {
            *ci -= ri;
        }
        Jet { c }
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.c[i] * rhs.c[k - i];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Dot product of 3-vectors of jets.
pub fn dot3<const N: usize>(a: &[Jet<N>; 3], b: &[Jet<N>; 3]) -> Jet<N> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product of 3-vectors of jets.
pub fn cross3<const N: usize>(a: &[Jet<N>; 3], b: &[Jet<N>; 3]) -> [Jet<N>; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Curvature and torsion of a space curve from one jet of its position,
/// valid for any regular parametrization (not just unit speed).
pub fn curvature_torsion<const N: usize>(gamma: &[Jet<N>; 3]) -> (f64, f64) {
    assert!(N >= 4, "need three position derivatives");
    let d1 = [deriv(gamma[0], 1), deriv(gamma[1], 1), deriv(gamma[2], 1)];
    let d2 = [deriv(gamma[0], 2), deriv(gamma[1], 2), deriv(gamma[2], 2)];
    let d3 = [deriv(gamma[0], 3), deriv(gamma[1], 3), deriv(gamma[2], 3)];
    let cross = [
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ];
    let cross_sq = cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2];
    let speed_sq = d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2];
    let k = cross_sq.sqrt() / speed_sq.powf(1.5);
    let triple = cross[0] * d3[0] + cross[1] * d3[1] + cross[2] * d3[2];
    (k, triple / cross_sq)
}

fn deriv<const N: usize>(j: Jet<N>, k: usize) -> f64 {
    j.derivative(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type J = Jet<6>;

    #[test]
    fn product_rule() {
        let t = J::var(0.7);
        let f = t * t * t; // t³: derivatives 3t², 6t, 6, 0
        assert_relative_eq!(f.derivative(1), 3.0 * 0.49, max_relative = 1e-14);
        assert_relative_eq!(f.derivative(2), 4.2, max_relative = 1e-14);
        assert_relative_eq!(f.derivative(3), 6.0, max_relative = 1e-14);
        assert_eq!(f.derivative(4), 0.0);
    }

    #[test]
    fn div_sqrt_invert_mul() {
        let t = J::var(0.3);
        let f = (J::con(1.0) + t * t).sqrt();
        let back = f * f;
        assert_relative_eq!(back.c[0], 1.09, max_relative = 1e-14);
        assert_relative_eq!(back.derivative(1), 0.6, max_relative = 1e-13);
        assert_relative_eq!(back.derivative(3), 0.0, epsilon = 1e-13);

        let q = t.div(f);
        let recovered = q * f;
        for k in 0..4 {
            assert_relative_eq!(recovered.c[k], t.c[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn sin_cos_derivatives() {
        let t = J::var(1.1);
        let (s, c) = t.sin_cos();
        assert_relative_eq!(s.derivative(1), 1.1f64.cos(), max_relative = 1e-14);
        assert_relative_eq!(s.derivative(2), -1.1f64.sin(), max_relative = 1e-13);
        assert_relative_eq!(c.derivative(3), 1.1f64.sin(), max_relative = 1e-13);
        // chain rule through a composite argument
        let (s2, _) = (t * t).sin_cos();
        assert_relative_eq!(s2.derivative(1), 2.2 * (1.21f64).cos(), max_relative = 1e-13);
    }

    #[test]
    fn helix_curvature_torsion() {
        // (a cos t, a sin t, b t) has k = a/(a²+b²), τ = b/(a²+b²).
        let (a, b) = (2.0, 0.5);
        let t = J::var(0.9);
        let (s, c) = t.sin_cos();
        let gamma = [c.scale(a), s.scale(a), t.scale(b)];
        let (k, tau) = curvature_torsion(&gamma);
        assert_relative_eq!(k, a / (a * a + b * b), max_relative = 1e-13);
        assert_relative_eq!(tau, b / (a * a + b * b), max_relative = 1e-13);
    }
}
