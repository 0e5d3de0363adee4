//! Small numeric helpers: fixed-order Gauss quadrature, a safeguarded
//! Newton solver, and angle unwrapping.

/// 16-point Gauss–Legendre abscissae on [-1, 1], positive half.
const GAUSS_X: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];
const GAUSS_W: [f64; 8] = [
    0.189_450_610_455_068_585_436,
    0.182_603_415_044_923_611_532,
    0.169_156_519_395_002_619_133,
    0.149_595_988_816_576_763_725,
    0.124_628_971_255_534_029_550,
    0.095_158_511_682_492_591_399,
    0.062_253_523_938_647_706_282,
    0.027_152_459_411_754_037_433,
];

/// Composite 16-point Gauss–Legendre integration of `f` over [a, b].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (x, w) in GAUSS_X.iter().zip(GAUSS_W) {
            acc += w * (f(mid + half * x) + f(mid - half * x));
        }
        total += acc * half;
    }
    total
}

/// Root of a monotone function on [lo, hi] by Newton steps clipped to a
/// shrinking bracket; `f` returns (value, derivative).
pub fn solve_monotone(f: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a).0;
    let mut x = 0.5 * (a + b);
    let increasing = fa <= 0.0;
    for _ in 0..100 {
        let (v, d) = f(x);
        let signed = if increasing { v } else { -v };
        if signed > 0.0 {
            b = x;
        } else {
            a = x;
        }
        let step = if d != 0.0 { v / d } else { f64::INFINITY };
        let mut next = x - step;
        if !(a..=b).contains(&next) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= tol {
            return next;
        }
        x = next;
    }
    x
}

/// Cumulative arc length s(t) = ∫ speed dt over [t0, t1], tabulated on a
/// fine grid for monotone inversion.
pub struct CumulativeArc<F: Fn(f64) -> f64> {
    speed: F,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<F: Fn(f64) -> f64> CumulativeArc<F> {
    pub fn build(speed: F, t0: f64, t1: f64, cells: usize) -> Self {
        let mut nodes = Vec::with_capacity(cells + 1);
        let mut cumulative = Vec::with_capacity(cells + 1);
        nodes.push(t0);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let a = t0 + (t1 - t0) * i as f64 / cells as f64;
            let b = t0 + (t1 - t0) * (i + 1) as f64 / cells as f64;
            acc += integrate(|t| speed(t), a, b, 1);
            nodes.push(b);
            cumulative.push(acc);
        }
        CumulativeArc { speed, nodes, cumulative }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Parameter t with ∫_{t0}^{t} speed = s, clamped into the table range.
    pub fn invert(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.total());
        let idx = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => return self.nodes[i],
            Err(i) => i - 1,
        };
        let (t_lo, t_hi) = (self.nodes[idx], self.nodes[idx + 1]);
        let s_lo = self.cumulative[idx];
        solve_monotone(
            |t| (s_lo + integrate(|u| (self.speed)(u), t_lo, t, 1) - s, (self.speed)(t)),
            t_lo,
            t_hi,
            1e-15,
        )
    }
}

/// Add 2π multiples in place so consecutive samples differ by less than π.
pub fn unwrap_angles(angles: &mut [f64]) {
    use std::f64::consts::{PI, TAU};
    for i in 1..angles.len() {
        let mut delta = angles[i] - angles[i - 1];
        while delta > PI {
            angles[i] -= TAU;
            delta -= TAU;
        }
        while delta < -PI {
            angles[i] += TAU;
            delta += TAU;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gauss_is_exact_to_degree_31() {
        let got = integrate(|u| u.powi(31), 0.0, 1.0, 1);
        assert_relative_eq!(got, 1.0 / 32.0, max_relative = 1e-14);
        let perimeter = integrate(|_| 1.0, 0.0, 2.0 * PI, 4);
        assert_relative_eq!(perimeter, 2.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn gauss_converges_on_smooth_integrands() {
        let got = integrate(f64::sin, 0.0, PI, 2);
        assert_relative_eq!(got, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn newton_finds_bracketed_roots() {
        let root = solve_monotone(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-14);
        assert_relative_eq!(root, 2.0_f64.sqrt(), max_relative = 1e-12);
        // decreasing function
        let root = solve_monotone(|x| (1.0 - x.exp(), -x.exp()), -1.0, 3.0, 1e-14);
        assert_relative_eq!(root, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let mut a = vec![3.0, -3.1, 3.05, -3.0];
        unwrap_angles(&mut a);
        for w in a.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
        assert_relative_eq!(a[1], -3.1 + 2.0 * PI);
    }
}
